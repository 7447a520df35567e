//! Exact arithmetic: finite fields, polynomials, truncated power series,
//! matrices over these, and the closure/norm machinery built on top.

pub mod ff;
pub mod group;
pub mod matrix;
pub mod norms;
pub mod nt;
pub mod poly;
pub mod series;
pub mod smith;
