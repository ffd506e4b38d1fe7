//! The exact multivariate polynomial ring and momentum forms.

mod atom;
mod momentum;
mod monomial;
mod mpoly;
mod parse;
mod render;

pub use atom::{canonical_rotation, Atom};
pub use momentum::MomentumForm;
pub use monomial::Monomial;
pub use mpoly::MPoly;
pub use parse::parse_poly;
pub use render::{to_json, to_latex};

use num_bigint::BigInt;

/// Arbitrary-precision rational coefficient.
pub type Rat = num_rational::Ratio<BigInt>;

/// Rational from an integer pair, for tests and literals.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}
