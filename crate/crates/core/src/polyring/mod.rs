//! Exact arithmetic in `Q[x, y]` and `Q[t]`.

mod forms;
mod monomial;
mod poly;
mod unipoly;

use num_bigint::BigInt;
use thiserror::Error;

pub use forms::{express_in, leading_form, normalize_generator, pure_power_of_form, LeadingForm, PurePower};
pub use monomial::Monomial;
pub use poly::{jacobian_det, Poly};
pub use unipoly::UniPoly;

/// Ground field element. Always stored reduced with a positive denominator.
pub type Rat = num_rational::BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("the zero polynomial has no leading form")]
    ZeroPolynomial,
    #[error("polynomial is not in the subalgebra generated by the given element")]
    NotInSubalgebra,
    #[error("cannot express in terms of a constant")]
    ConstantGenerator,
}
