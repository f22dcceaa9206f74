//! Finite-dimensional Lie algebras of derivations of `K[x, y]`.
//!
//! A [`LieBasis`] is kept in reduced row echelon form over the coefficient
//! vectors of its elements, indexed by (monomial, component) with `∂x`
//! above `∂y` and monomials in grlex order. The pivot of a row is its
//! largest index and carries coefficient 1, so a span has exactly one basis
//! and equal spans compare equal.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::derivation::Derivation;
use crate::linalg;
use crate::polyring::{Monomial, Rat};

pub const DEFAULT_DIM_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("basis is not closed under the bracket")]
    NotClosed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    Dy,
    Dx,
}

/// Position of one coefficient of a derivation.
pub type Key = (Monomial, Component);

/// Largest index with a nonzero coefficient.
pub fn pivot_key(d: &Derivation) -> Option<Key> {
    let px = d.p.leading_term().map(|(m, _)| (*m, Component::Dx));
    let py = d.q.leading_term().map(|(m, _)| (*m, Component::Dy));
    px.max(py)
}

fn coeff_at(d: &Derivation, key: &Key) -> Rat {
    match key.1 {
        Component::Dx => d.p.coeff(&key.0),
        Component::Dy => d.q.coeff(&key.0),
    }
}

fn axpy(d: &mut Derivation, row: &Derivation, c: &Rat) {
    let neg = -c;
    d.p.add_scaled(&row.p, &neg);
    d.q.add_scaled(&row.q, &neg);
}

/// A basis of a finite-dimensional subspace of `W2`, optionally with the
/// structure constants of the bracket.
#[derive(Clone, PartialEq, Eq)]
pub struct LieBasis {
    rows: Vec<Derivation>,
    pivots: Vec<Key>,
    structure: Option<Vec<Vec<Vec<Rat>>>>,
}

impl LieBasis {
    pub fn empty() -> Self {
        LieBasis {
            rows: Vec::new(),
            pivots: Vec::new(),
            structure: None,
        }
    }

    pub fn basis(&self) -> &[Derivation] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Coordinates of `[b_i, b_j]` in the basis, if computed.
    pub fn structure(&self) -> Option<&Vec<Vec<Vec<Rat>>>> {
        self.structure.as_ref()
    }

    fn reduce(&self, d: &Derivation) -> (Vec<Rat>, Derivation) {
        let mut rest = d.clone();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, key) in self.rows.iter().zip(&self.pivots) {
            let c = coeff_at(&rest, key);
            if !c.is_zero() {
                axpy(&mut rest, row, &c);
            }
            coords.push(c);
        }
        (coords, rest)
    }

    /// Coordinates of `d` in the basis, or `None` outside the span.
    pub fn coordinates(&self, d: &Derivation) -> Option<Vec<Rat>> {
        let (coords, rest) = self.reduce(d);
        rest.is_zero().then_some(coords)
    }

    pub fn contains(&self, d: &Derivation) -> bool {
        self.reduce(d).1.is_zero()
    }

    /// Adds `d` to the span. Returns false when it was already there.
    pub fn insert(&mut self, d: &Derivation) -> bool {
        let (_, mut rest) = self.reduce(d);
        let Some(key) = pivot_key(&rest) else {
            return false;
        };
        let inv = coeff_at(&rest, &key).recip();
        if !inv.is_one() {
            rest = rest.scale(&inv);
        }
        for row in &mut self.rows {
            let c = coeff_at(row, &key);
            if !c.is_zero() {
                axpy(row, &rest, &c);
            }
        }
        let at = self.pivots.partition_point(|k| k.cmp(&key) == Ordering::Greater);
        self.pivots.insert(at, key);
        self.rows.insert(at, rest);
        self.structure = None;
        true
    }

    /// Fills in the structure constants, failing when some bracket leaves
    /// the span.
    pub fn compute_structure(&mut self) -> Result<(), LieError> {
        let n = self.rows.len();
        let mut table = vec![vec![vec![Rat::zero(); n]; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let coords = self
                    .coordinates(&self.rows[i].bracket(&self.rows[j]))
                    .ok_or(LieError::NotClosed)?;
                table[j][i] = coords.iter().map(|c| -c).collect();
                table[i][j] = coords;
            }
        }
        self.structure = Some(table);
        Ok(())
    }

    // Structure constants by linearity from the brackets of a spanning set
    // of independent elements: rows = T · elements.
    fn structure_from_elements(&mut self, elements: &[Derivation], brackets: &[(usize, usize, Derivation)]) {
        let n = self.rows.len();
        debug_assert_eq!(elements.len(), n);
        let c: Vec<Vec<Rat>> = elements
            .iter()
            .map(|e| self.coordinates(e).expect("element of the span"))
            .collect();
        // coordinates are rows of C with e_k = Σ_r C[k][r] row_r, so T = C^{-1}
        let t = linalg::inverse(&c).expect("independent elements");
        let mut b = vec![vec![vec![Rat::zero(); n]; n]; n];
        for (i, j, d) in brackets {
            let coords = self.coordinates(d).expect("closure is bracket-closed");
            b[*j][*i] = coords.iter().map(|v| -v).collect();
            b[*i][*j] = coords;
        }
        let mut table = vec![vec![vec![Rat::zero(); n]; n]; n];
        for r in 0..n {
            // M[j] = Σ_i T[r][i] B[i][j]
            let mut m = vec![vec![Rat::zero(); n]; n];
            for (i, tri) in t[r].iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for j in 0..n {
                    for (o, v) in m[j].iter_mut().zip(&b[i][j]) {
                        if !v.is_zero() {
                            *o += tri * v;
                        }
                    }
                }
            }
            for s in 0..n {
                let mut out = vec![Rat::zero(); n];
                for (j, tsj) in t[s].iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                    for (o, v) in out.iter_mut().zip(&m[j]) {
                        if !v.is_zero() {
                            *o += tsj * v;
                        }
                    }
                }
                table[r][s] = out;
            }
        }
        self.structure = Some(table);
    }

    /// Exact antisymmetry and Jacobi identity of the stored constants.
    pub fn structure_is_consistent(&self) -> bool {
        let Some(s) = &self.structure else {
            return false;
        };
        let n = self.rows.len();
        for i in 0..n {
            for j in 0..n {
                if s[i][j].iter().zip(&s[j][i]).any(|(a, b)| !(a + b).is_zero()) {
                    return false;
                }
            }
        }
        // [b_i,[b_j,b_k]] + [b_j,[b_k,b_i]] + [b_k,[b_i,b_j]] = 0
        let bracket_with = |i: usize, v: &[Rat]| -> Vec<Rat> {
            let mut out = vec![Rat::zero(); n];
            for (l, vl) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (o, c) in out.iter_mut().zip(&s[i][l]) {
                    *o += vl * c;
                }
            }
            out
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = bracket_with(i, &s[j][k]);
                    let b = bracket_with(j, &s[k][i]);
                    let c = bracket_with(k, &s[i][j]);
                    if a.iter().zip(&b).zip(&c).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The derivation with the given coordinates.
    pub fn combine(&self, coords: &[Rat]) -> Derivation {
        let mut d = Derivation::zero();
        for (row, c) in self.rows.iter().zip(coords) {
            if !c.is_zero() {
                axpy(&mut d, row, &-c);
            }
        }
        d
    }
}

impl fmt::Debug for LieBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

/// Reduced echelon basis of the linear span of `list`.
pub fn span_reduce(list: &[Derivation]) -> LieBasis {
    let mut basis = LieBasis::empty();
    for d in list {
        basis.insert(d);
    }
    basis
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub basis: LieBasis,
    pub dimension: usize,
    pub rounds: usize,
    pub capped: bool,
}

/// Closes the span of `generators` under the bracket. Stops once the
/// dimension exceeds `dim_cap`; structure constants are only present for
/// uncapped reports.
pub fn lie_closure(generators: &[Derivation], dim_cap: usize) -> ClosureReport {
    assert!(dim_cap >= 1, "dim_cap must be positive");
    let mut basis = LieBasis::empty();
    let mut elements: Vec<Derivation> = Vec::new();
    for g in generators {
        if basis.insert(g) {
            elements.push(g.clone());
        }
    }
    let mut brackets: Vec<(usize, usize, Derivation)> = Vec::new();
    let mut rounds = 0;
    let mut capped = basis.dim() > dim_cap;
    let mut done = 0;
    while !capped && done < elements.len() {
        rounds += 1;
        let end = elements.len();
        'round: for j in done..end {
            for i in 0..j {
                let b = elements[i].bracket(&elements[j]);
                if basis.insert(&b) {
                    elements.push(b.clone());
                    if basis.dim() > dim_cap {
                        capped = true;
                        break 'round;
                    }
                }
                brackets.push((i, j, b));
            }
        }
        done = end;
    }
    if !capped {
        basis.structure_from_elements(&elements, &brackets);
    }
    ClosureReport {
        dimension: basis.dim(),
        basis,
        rounds,
        capped,
    }
}

/// Rank of the `K[x, y]`-module generated by the basis.
pub fn rank_over_a(basis: &LieBasis) -> usize {
    let rows = basis.basis();
    if rows.is_empty() {
        return 0;
    }
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if !rows[i].wronskian(&rows[j]).is_zero() {
                return 2;
            }
        }
    }
    1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralSeries {
    /// Dimensions of `L, [L, L], [L, [L, L]], ...` up to zero or the first
    /// repeat.
    pub dims: Vec<usize>,
    pub nilpotent: bool,
}

impl CentralSeries {
    /// Nilpotency class, the number of steps needed to reach zero.
    pub fn class(&self) -> Option<usize> {
        self.nilpotent.then(|| self.dims.len() - 1)
    }
}

/// Lower central series computed from the structure constants.
pub fn lower_central_series(basis: &LieBasis) -> Result<CentralSeries, LieError> {
    let s = basis.structure().ok_or(LieError::NotClosed)?;
    let n = basis.dim();
    let mut current: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut e = vec![Rat::zero(); n];
            e[i] = Rat::one();
            e
        })
        .collect();
    let mut dims = vec![n];
    while !current.is_empty() {
        let mut next = Vec::new();
        for i in 0..n {
            for v in &current {
                let mut out = vec![Rat::zero(); n];
                for (l, vl) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    for (o, c) in out.iter_mut().zip(&s[i][l]) {
                        *o += vl * c;
                    }
                }
                next.push(out);
            }
        }
        linalg::rref(&mut next, n);
        let dim = next.len();
        dims.push(dim);
        if dim == current.len() {
            return Ok(CentralSeries { dims, nilpotent: false });
        }
        current = next;
    }
    Ok(CentralSeries { dims, nilpotent: true })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlaneReport {
    pub sampled: usize,
    /// Sampled planes closed under the bracket.
    pub subalgebras: usize,
    /// Closed sampled planes whose bracket vanishes.
    pub abelian: usize,
}

/// Samples two-dimensional subspaces (all coordinate planes, then random
/// ones with small integer coordinates) and records which are subalgebras
/// and which of those are abelian. In a nilpotent algebra every
/// two-dimensional subalgebra is abelian.
pub fn sample_planes<R: Rng>(basis: &LieBasis, rng: &mut R, random_samples: usize) -> Result<PlaneReport, LieError> {
    let n = basis.dim();
    if basis.structure().is_none() {
        return Err(LieError::NotClosed);
    }
    let mut report = PlaneReport::default();
    let unit = |i: usize| {
        let mut e = vec![Rat::zero(); n];
        e[i] = Rat::one();
        e
    };
    let mut planes = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            planes.push((unit(i), unit(j)));
        }
    }
    if n >= 2 {
        for _ in 0..random_samples {
            let mut draw = || (0..n).map(|_| Rat::from_integer(rng.gen_range(-3..=3).into())).collect::<Vec<_>>();
            planes.push((draw(), draw()));
        }
    }
    for (u, v) in planes {
        if linalg::rank(vec![u.clone(), v.clone()], n) < 2 {
            continue;
        }
        report.sampled += 1;
        let du = basis.combine(&u);
        let dv = basis.combine(&v);
        let b = du.bracket(&dv);
        let plane = span_reduce(&[du, dv]);
        if plane.contains(&b) {
            report.subalgebras += 1;
            if b.is_zero() {
                report.abelian += 1;
            }
        }
    }
    Ok(report)
}

/// True when `d` is a constant-coefficient derivation.
pub fn is_constant_field(d: &Derivation) -> bool {
    d.p.is_constant() && d.q.is_constant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{rat, Poly};
    use rand::SeedableRng;

    fn x() -> Poly {
        Poly::x()
    }
    fn y() -> Poly {
        Poly::y()
    }
    fn d(p: Poly, q: Poly) -> Derivation {
        Derivation::new(p, q)
    }

    #[test]
    fn span_reduce_examples() {
        let b = span_reduce(&[Derivation::dx(), Derivation::dx().scale(&rat(2, 1))]);
        assert_eq!(b.basis(), &[Derivation::dx()]);
        let b = span_reduce(&[Derivation::dx(), Derivation::dy()]);
        assert_eq!(b.dim(), 2);
        assert_eq!(span_reduce(&[]).dim(), 0);
    }

    #[test]
    fn span_is_canonical() {
        let a = d(x(), y());
        let b = d(Poly::one(), x());
        let s1 = span_reduce(&[a.clone(), b.clone()]);
        let s2 = span_reduce(&[&a + &b, a.scale(&rat(-3, 2)) - b.scale(&rat(5, 1))]);
        assert_eq!(s1, s2);
        for row in s1.basis() {
            assert!(coeff_at(row, &pivot_key(row).unwrap()).is_one());
        }
    }

    #[test]
    fn closure_examples() {
        let r = lie_closure(&[Derivation::dx(), d(Poly::zero(), x().pow(2))], 64);
        assert!(!r.capped);
        assert_eq!(r.dimension, 4);
        for g in [Derivation::dy(), d(Poly::zero(), x()), d(Poly::zero(), x().pow(2)), Derivation::dx()] {
            assert!(r.basis.contains(&g));
        }
        let mut direct = r.basis.clone();
        direct.compute_structure().unwrap();
        assert_eq!(direct.structure(), r.basis.structure());
        let s = lower_central_series(&r.basis).unwrap();
        assert_eq!(s.dims, vec![4, 2, 1, 0]);
        assert_eq!(s.class(), Some(3));

        let r = lie_closure(&[Derivation::dx(), Derivation::dy()], 64);
        assert_eq!(r.dimension, 2);
        let s = lower_central_series(&r.basis).unwrap();
        assert_eq!(s.dims, vec![2, 0]);
        assert_eq!(s.class(), Some(1));
    }

    #[test]
    fn sl2_closes_and_is_not_nilpotent() {
        let r = lie_closure(&[d(Poly::zero(), x()), d(y(), Poly::zero())], 10);
        assert!(!r.capped);
        let mut direct = r.basis.clone();
        direct.compute_structure().unwrap();
        assert_eq!(direct.structure(), r.basis.structure());
        assert_eq!(r.dimension, 3);
        assert!(r.basis.contains(&d(x(), -y())));
        let s = lower_central_series(&r.basis).unwrap();
        assert!(!s.nilpotent);
        assert_eq!(*s.dims.last().unwrap(), 3);
        assert!(r.basis.structure_is_consistent());
    }

    #[test]
    fn cap_is_reported() {
        // ∂x and x^3 ∂x generate an infinite-dimensional algebra
        let r = lie_closure(&[Derivation::dx(), d(x().pow(3), Poly::zero())], 8);
        assert!(r.capped);
        assert!(r.basis.structure().is_none());
        assert_eq!(lower_central_series(&r.basis), Err(LieError::NotClosed));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_over_a(&span_reduce(&[Derivation::dx(), Derivation::dy()])), 2);
        assert_eq!(rank_over_a(&span_reduce(&[Derivation::dy(), d(Poly::zero(), x())])), 1);
        assert_eq!(rank_over_a(&LieBasis::empty()), 0);
    }

    #[test]
    fn coordinates_round_trip() {
        let r = lie_closure(&[Derivation::dx(), d(Poly::zero(), x().pow(2))], 64);
        let target = d(rat(3, 1).into(), &x() * &Poly::from_int(5) - Poly::one());
        let c = r.basis.coordinates(&target).unwrap();
        assert_eq!(r.basis.combine(&c), target);
        assert!(r.basis.coordinates(&d(y(), Poly::zero())).is_none());
    }

    #[test]
    fn planes_in_nilpotent_algebra_are_abelian() {
        let r = lie_closure(&[Derivation::dx(), d(Poly::zero(), x().pow(3))], 64);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let rep = sample_planes(&r.basis, &mut rng, 20).unwrap();
        assert!(rep.sampled > 0);
        assert_eq!(rep.subalgebras, rep.abelian);
    }
}
