//! Exact computation of parallel frames of flat connections on singular
//! plane curves, with certified membership tests deciding whether the
//! frames are restrictions of ambient holomorphic functions.

pub mod coeff_series;
pub mod connection;
pub mod curve;
pub mod forms;
pub mod io;
pub mod local_algebra;
pub mod paper;
pub mod suites;
pub mod error;

pub use coeff_series::{GaussianRational, Monomial, Polynomial2, USeries, Var};
