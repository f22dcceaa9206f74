use std::cmp::Ordering;
use std::fmt;

/// A monomial `x^degx * y^degy`.
///
/// Ordered graded-lexicographically with `x > y`: total degree first, then
/// the `x` exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub degx: u32,
    pub degy: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { degx: 0, degy: 0 };
    pub const X: Monomial = Monomial { degx: 1, degy: 0 };
    pub const Y: Monomial = Monomial { degx: 0, degy: 1 };

    pub const fn new(degx: u32, degy: u32) -> Self {
        Monomial { degx, degy }
    }

    #[inline]
    pub fn total_degree(&self) -> u32 {
        self.degx + self.degy
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.degx + other.degx, self.degy + other.degy)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if self.degx >= other.degx && self.degy >= other.degy {
            Some(Monomial::new(self.degx - other.degx, self.degy - other.degy))
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.degx == 0 && self.degy == 0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then(self.degx.cmp(&other.degx))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (name, e) in [("x", self.degx), ("y", self.degy)] {
            if e == 0 {
                continue;
            }
            if wrote {
                f.write_str("*")?;
            }
            if e == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{e}")?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("1")?;
        }
        Ok(())
    }
}
