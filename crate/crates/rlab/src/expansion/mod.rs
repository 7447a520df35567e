//! Combinatorial and geometric expansion: Cheeger constants, coboundary
//! expansion, filling, discrepancy/mixing validators, and planar overlap.

pub mod cheeger;
pub mod cochain;
pub mod mixing;
pub mod overlap;

pub use cheeger::{cheeger_graph, cheeger_highdim, transversal_count, CheegerReport, PartitionWitness};
pub use cochain::{coboundary_expansion, filling, CochainWitness};
pub use mixing::{
    discrepancy, mu0_highdim, validate_cheeger_inequalities, validate_mixing,
    CheegerValidation, MixingReport,
};
pub use overlap::{overlap_depth, overlap_estimate, OverlapResult, Point};
