//! Ramanujan graphs and complexes: construction and expansion verification.

pub mod algebra;
pub mod building;
pub mod cartwright_steger;
pub mod complex;
pub mod doc;
pub mod error;
pub mod expansion;
pub mod graph;
pub mod lps;
pub mod spectra;
