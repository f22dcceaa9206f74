use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Poly, Rat};

/// Univariate polynomial in `t`, coefficients indexed by degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly::default()
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        UniPoly::new(vec![Rat::zero(), Rat::one()])
    }

    /// Trailing zero coefficients are trimmed.
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// `n`-th derivative.
    pub fn derivative_n(&self, n: usize) -> UniPoly {
        (0..n).fold(self.clone(), |acc, _| acc.derivative())
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    /// Composition `self(a)` by Horner's rule.
    pub fn eval_poly(&self, a: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * a;
            acc += Poly::constant(c.clone());
        }
        acc
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * t + c)
    }

    /// Reinterprets a polynomial in `x` alone as a polynomial in `t`.
    pub fn from_poly_in_x(p: &Poly) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (m, c) in p.terms() {
            if m.degy != 0 {
                return None;
            }
            let i = m.degx as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, Rat::zero());
            }
            coeffs[i] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    /// The same polynomial with `t` renamed to `x`.
    pub fn to_poly_in_x(&self) -> Poly {
        self.eval_poly(&Poly::x())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            if i == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    #[test]
    fn trims_and_prints() {
        let p = UniPoly::new(vec![rat(1, 1), rat(0, 1), rat(-1, 2), rat(0, 1)]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "-1/2*t^2 + 1");
        assert_eq!(p.derivative().to_string(), "-t");
        assert_eq!(UniPoly::zero().to_string(), "0");
    }

    #[test]
    fn composition() {
        let f = UniPoly::new(vec![rat(1, 1), rat(0, 1), rat(1, 1)]);
        let a = &Poly::x() + &Poly::y().pow(2);
        assert_eq!(f.eval_poly(&a), &a.pow(2) + &Poly::one());
    }
}
