//! Exact computer algebra for linear differential operators over Q(x).

pub mod diagonal;
pub mod diffop;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod homomorphisms;
pub mod powers;
pub mod qx;
pub mod random;
pub mod ratsol;
pub mod selfadjoint;
pub mod series;
pub mod tower;

pub use diffop::{DiffOperator, ThetaExpr};
pub use error::{Error, Result};
pub use qx::{Poly, QxMatrix, RatFunc, Rational, ZPoly};
pub use series::UnivariateSeries;
