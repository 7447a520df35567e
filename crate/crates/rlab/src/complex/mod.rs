//! Simplicial complexes, chain/cochain machinery, and Betti numbers.

pub mod chains;
pub mod f2;
pub mod simplicial;

pub use chains::{
    betti_f2, betti_f2_reduced, boundary_f2, boundary_real, coboundary_f2, coboundary_real,
    homology_dim_f2, laplacian, LapVariant,
};
pub use f2::F2Matrix;
pub use simplicial::{clique_complex, incidence, random_complex, SimplicialComplex};
