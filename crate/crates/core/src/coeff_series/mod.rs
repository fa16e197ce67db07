//! Exact coefficients, truncated univariate series and bivariate polynomials.

mod gaussian;
mod poly;
mod series;

pub use gaussian::GaussianRational;
pub use poly::{Monomial, Polynomial2, Var};
pub(crate) use poly::powers_series;
pub use series::USeries;
