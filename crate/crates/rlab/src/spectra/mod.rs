//! Spectral machinery: eigensolves with residual contracts, Ramanujan
//! verdicts for graphs and complexes, joint spectra, and the Sigma_d test.

pub mod eigs;
pub mod gaps;
pub mod joint;
pub mod ramanujan;
pub mod sigma;

pub use eigs::{char_poly_int, eigs_via_char_poly, lanczos_extremal, poly_roots, sym_eigs, sym_eigs_vectors};
pub use gaps::{kernel_basis_real, spectral_gap};
pub use joint::{joint_spectrum, JointPair};
pub use ramanujan::{
    adjacency_matrix, girth, graph_spectrum, is_ramanujan_graph, mu_values, RamanujanVerdict,
};
pub use sigma::{
    gaussian_binomial, is_ramanujan_complex, sigma_d_membership, trivial_tuples, ComplexVerdict,
    SigmaVerdict, TupleClass,
};
