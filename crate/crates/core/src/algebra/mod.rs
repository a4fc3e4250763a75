//! Exact arithmetic: integer polynomials, rational matrices, interval
//! enclosures, certified root isolation and algebraic numbers.

pub mod algebraic;
pub mod field;
pub mod interval;
pub mod isolate;
pub mod matrix;
pub mod poly;

pub type Rational = num_rational::BigRational;


pub use algebraic::AlgebraicNumber;
pub use poly::IntPolynomial;
