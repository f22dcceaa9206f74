use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::{Rat, Var};

/// Exact bivariate polynomial over the rationals.
///
/// Terms are kept in a map keyed by [`Monomial`], so the graded
/// lexicographic order is the iteration order and two polynomials are equal
/// iff their term maps are equal. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

// Dense accumulation grids beyond this many cells fall back to a sparse map.
const DENSE_GRID_LIMIT: usize = 1 << 22;

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::monomial(c, Monomial::ONE)
    }

    pub fn from_int(c: i64) -> Self {
        Poly::constant(Rat::from_integer(BigInt::from(c)))
    }

    pub fn x() -> Self {
        Poly::monomial(Rat::one(), Monomial::X)
    }

    pub fn y() -> Self {
        Poly::monomial(Rat::one(), Monomial::Y)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Poly::x(),
            Var::Y => Poly::y(),
        }
    }

    pub fn monomial(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Builds a polynomial from arbitrary `(monomial, coefficient)` pairs,
    /// summing repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(iter: I) -> Self {
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in iter {
            if c.is_zero() {
                continue;
            }
            match terms.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(&Monomial::ONE).is_one()
    }

    /// True for constants, including zero.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Returns the value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Rat> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::ONE)
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff_ref(&self, m: &Monomial) -> Option<&Rat> {
        self.terms.get(m)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl DoubleEndedIterator<Item = (Monomial, Rat)> {
        self.terms.into_iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| match v {
                Var::X => m.degx,
                Var::Y => m.degy,
            })
            .max()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.values().next_back()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Rat, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(*m, v * c);
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut result = Poly::one();
        if e == 0 {
            return result;
        }
        let mut base = self.clone();
        loop {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        result
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, dm) = match v {
                Var::X if m.degx > 0 => (m.degx, Monomial::new(m.degx - 1, m.degy)),
                Var::Y if m.degy > 0 => (m.degy, Monomial::new(m.degx, m.degy - 1)),
                _ => continue,
            };
            terms.insert(dm, c * Rat::from_integer(BigInt::from(e)));
        }
        Poly { terms }
    }

    /// Repeated partial derivative `∂^kx/∂x^kx ∂^ky/∂y^ky`.
    pub fn partial_n(&self, kx: u32, ky: u32) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.degx < kx || m.degy < ky {
                continue;
            }
            let mut f = BigInt::one();
            for i in 0..kx {
                f *= m.degx - i;
            }
            for i in 0..ky {
                f *= m.degy - i;
            }
            terms.insert(Monomial::new(m.degx - kx, m.degy - ky), c * Rat::from_integer(f));
        }
        Poly { terms }
    }

    /// Image under the ring homomorphism `x ↦ img_x`, `y ↦ img_y`.
    ///
    /// Works over integers: with `self = N/D`, `img_x = X/Dx`, `img_y = Y/Dy`
    /// it evaluates `Σ N_ij X^i Dx^(I-i) Y^j Dy^(J-j)` by Horner's rule and
    /// divides by `D Dx^I Dy^J` once at the end.
    pub fn substitute(&self, img_x: &Poly, img_y: &Poly) -> Poly {
        if self.is_constant() {
            return self.clone();
        }
        let x_is_id = *img_x == Poly::x();
        let y_is_id = *img_y == Poly::y();
        if x_is_id && y_is_id {
            return self.clone();
        }
        let (den, nums) = self.integer_form();
        let (dx, xs) = img_x.integer_form();
        let (dy, ys) = img_y.integer_form();
        // self = Σ_i x^i Q_i(y)
        let mut rows: BTreeMap<u32, Vec<(u32, &BigInt)>> = BTreeMap::new();
        for (m, c) in &nums {
            rows.entry(m.degx).or_default().push((m.degy, c));
        }
        let max_i = *rows.keys().next_back().expect("nonconstant");
        let max_j = nums.keys().map(|m| m.degy).max().unwrap_or(0);
        let dx_pows = powers(&dx, max_i);
        let dy_pows = powers(&dy, max_j);
        let mut y_pows: Vec<IntTerms> = vec![IntTerms::from([(Monomial::ONE, BigInt::one())])];
        let mut eval_row = |row: &[(u32, &BigInt)]| -> IntTerms {
            let mut out = IntTerms::new();
            for (j, c) in row {
                let j = *j as usize;
                while y_pows.len() <= j {
                    let next = int_mul(y_pows.last().unwrap(), &ys);
                    y_pows.push(next);
                }
                int_add_scaled(&mut out, &y_pows[j], &(*c * &dy_pows[max_j as usize - j]));
            }
            out
        };
        let mut acc = IntTerms::new();
        for i in (0..=max_i).rev() {
            if !acc.is_empty() {
                acc = int_mul(&acc, &xs);
            }
            if let Some(row) = rows.get(&i) {
                let r = eval_row(row);
                int_add_scaled(&mut acc, &r, &dx_pows[(max_i - i) as usize]);
            }
        }
        let total = den * &dx_pows[max_i as usize] * &dy_pows[max_j as usize];
        Poly {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Rat::new(c, total.clone())))
                .collect(),
        }
    }

    /// The homogeneous component of total degree `d`.
    pub fn homogeneous_component(&self, d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::total_degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when `divisor` does not
    /// divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (*lm, lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.checked_div(&lm)?;
            let qc = c / &lc;
            rem -= divisor.mul_monomial(&qc, &qm);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Value at a rational point.
    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            acc += c * num_traits::pow(x.clone(), m.degx as usize) * num_traits::pow(y.clone(), m.degy as usize);
        }
        acc
    }

    /// Common denominator and integer numerators.
    fn integer_form(&self) -> (BigInt, IntTerms) {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&den / c.denom())))
            .collect();
        (den, nums)
    }
}

type IntTerms = BTreeMap<Monomial, BigInt>;

fn powers(base: &BigInt, n: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(BigInt::one());
    for _ in 0..n {
        let next = out.last().unwrap() * base;
        out.push(next);
    }
    out
}

fn int_add_scaled(acc: &mut IntTerms, other: &IntTerms, s: &BigInt) {
    for (m, c) in other {
        let e = acc.entry(*m).or_insert_with(BigInt::zero);
        if s.is_one() {
            *e += c;
        } else {
            *e += c * s;
        }
    }
    acc.retain(|_, c| !c.is_zero());
}

fn int_mul(a: &IntTerms, b: &IntTerms) -> IntTerms {
    if a.is_empty() || b.is_empty() {
        return IntTerms::new();
    }
    if b.len() == 1 {
        let (mb, cb) = b.iter().next().unwrap();
        return a.iter().map(|(m, c)| (m.mul(mb), c * cb)).collect();
    }
    let dims = |t: &IntTerms| {
        t.keys()
            .fold((0usize, 0usize), |(x, y), m| (x.max(m.degx as usize), y.max(m.degy as usize)))
    };
    let (ax, ay) = dims(a);
    let (bx, by) = dims(b);
    let (w, h) = (ax + bx + 1, ay + by + 1);
    let mut out = IntTerms::new();
    if w.saturating_mul(h) <= DENSE_GRID_LIMIT {
        let mut grid = vec![BigInt::zero(); w * h];
        let mut used = vec![false; w * h];
        for (ma, ca) in a {
            for (mb, cb) in b {
                let idx = (ma.degx + mb.degx) as usize * h + (ma.degy + mb.degy) as usize;
                grid[idx] += ca * cb;
                used[idx] = true;
            }
        }
        for (idx, acc) in grid.into_iter().enumerate() {
            if used[idx] && !acc.is_zero() {
                out.insert(Monomial::new((idx / h) as u32, (idx % h) as u32), acc);
            }
        }
    } else {
        for (ma, ca) in a {
            for (mb, cb) in b {
                *out.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
    }
    out
}

fn mul_polys(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    if a.num_terms() == 1 {
        let (m, c) = a.leading_term().unwrap();
        return b.mul_monomial(c, m);
    }
    if b.num_terms() == 1 {
        let (m, c) = b.leading_term().unwrap();
        return a.mul_monomial(c, m);
    }
    let (da, na) = a.integer_form();
    let (db, nb) = b.integer_form();
    let den = da * db;
    Poly {
        terms: int_mul(&na, &nb)
            .into_iter()
            .map(|(m, c)| (m, Rat::new(c, den.clone())))
            .collect(),
    }
}

/// Jacobian determinant `f_x g_y - f_y g_x`.
pub fn jacobian_det(f: &Poly, g: &Poly) -> Poly {
    &f.partial(Var::X) * &g.partial(Var::Y) - &f.partial(Var::Y) * &g.partial(Var::X)
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        mul_polys(self, rhs)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        mul_polys(&self, &rhs)
    }
}

impl Add<&Poly> for Poly {
    type Output = Poly;
    fn add(mut self, rhs: &Poly) -> Poly {
        self += rhs;
        self
    }
}

impl Sub<&Poly> for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: &Poly) -> Poly {
        self -= rhs;
        self
    }
}

impl Mul<&Poly> for Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        mul_polys(&self, rhs)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl AddAssign for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            *self += &lhs;
            return;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

impl SubAssign for Poly {
    fn sub_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl From<Rat> for Poly {
    fn from(c: Rat) -> Self {
        Poly::constant(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
