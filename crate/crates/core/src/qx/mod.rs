//! Exact arithmetic substrate: rationals, polynomials over Q and Z,
//! rational functions, and linear algebra over Q and Q(x).

pub mod linalg;
pub mod matrix;
pub mod modular;
pub mod poly;
pub mod ratfunc;
pub mod zpoly;

pub use matrix::QxMatrix;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use zpoly::ZPoly;

/// Arbitrary-precision rational number in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for n/d.
pub fn qq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
