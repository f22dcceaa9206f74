//! Derivations `p ∂x + q ∂y` of `Q[x, y]` and the local nilpotency decision.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::automorphism::rectify_coordinate;
use crate::linalg::null_space;
use crate::polyring::{
    express_in, jacobian_det, leading_form, normalize_generator, Monomial, Poly, Rat, UniPoly, Var,
};

/// The derivation `p ∂/∂x + q ∂/∂y`; `(p, q) = (D(x), D(y))`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Derivation {
    pub p: Poly,
    pub q: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("derivation has nonzero divergence")]
    NonzeroDivergence,
    #[error("no nonconstant kernel element of degree at most {bound}")]
    NoKernelElementWithinBound { bound: u32 },
    #[error("the zero derivation has no kernel generator")]
    ZeroDerivation,
    #[error("derivation is not locally nilpotent: {0}")]
    NotLocallyNilpotent(NotLndReason),
    #[error("iterated bracket did not vanish within {cap} steps")]
    CapExceeded { cap: usize },
}

impl Derivation {
    pub fn new(p: Poly, q: Poly) -> Self {
        Derivation { p, q }
    }

    pub fn zero() -> Self {
        Derivation::default()
    }

    /// `∂/∂x`
    pub fn dx() -> Self {
        Derivation::new(Poly::one(), Poly::zero())
    }

    /// `∂/∂y`
    pub fn dy() -> Self {
        Derivation::new(Poly::zero(), Poly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Largest total degree of the two coefficients.
    pub fn degree(&self) -> Option<u32> {
        self.p.degree().max(self.q.degree())
    }

    /// `D(h) = p h_x + q h_y`.
    pub fn apply(&self, h: &Poly) -> Poly {
        let mut out = &self.p * &h.partial(Var::X);
        out += &self.q * &h.partial(Var::Y);
        out
    }

    /// `[self, other] = self∘other - other∘self`.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        Derivation::new(
            self.apply(&other.p) - other.apply(&self.p),
            self.apply(&other.q) - other.apply(&self.q),
        )
    }

    pub fn divergence(&self) -> Poly {
        self.p.partial(Var::X) + self.q.partial(Var::Y)
    }

    /// The Jacobian derivation `D_f = -f_y ∂x + f_x ∂y`, so `D_f(h) = [f, h]`.
    pub fn jacobian(f: &Poly) -> Derivation {
        Derivation::new(-f.partial(Var::Y), f.partial(Var::X))
    }

    /// The `h` with zero constant term such that `D = D_h`.
    pub fn hamiltonian(&self) -> Result<Poly, DerivationError> {
        if !self.divergence().is_zero() {
            return Err(DerivationError::NonzeroDivergence);
        }
        // h_y = -p, h_x = q
        let h1 = -integrate(&self.p, Var::Y);
        let rest = &self.q - &h1.partial(Var::X);
        debug_assert!(rest.degree_in(Var::Y).unwrap_or(0) == 0);
        Ok(h1 + integrate(&rest, Var::X))
    }

    /// `D^n(h)`.
    pub fn iterate(&self, h: &Poly, n: usize) -> Poly {
        let mut cur = h.clone();
        for _ in 0..n {
            if cur.is_zero() {
                break;
            }
            cur = self.apply(&cur);
        }
        cur
    }

    /// Least `n ≤ cap` with `D^n(h) = 0`, by iteration.
    pub fn nilpotency_index(&self, h: &Poly, cap: usize) -> Option<usize> {
        let mut cur = h.clone();
        for n in 0..=cap {
            if cur.is_zero() {
                return Some(n);
            }
            cur = self.apply(&cur);
        }
        None
    }

    pub fn scale(&self, c: &Rat) -> Derivation {
        Derivation::new(self.p.scale(c), self.q.scale(c))
    }

    /// `a · D`.
    pub fn mul_poly(&self, a: &Poly) -> Derivation {
        Derivation::new(a * &self.p, a * &self.q)
    }

    /// `p1 q2 - p2 q1`; zero iff the two derivations are dependent over
    /// `K[x, y]`.
    pub fn wronskian(&self, other: &Derivation) -> Poly {
        &self.p * &other.q - &other.p * &self.q
    }
}

fn integrate(p: &Poly, v: Var) -> Poly {
    Poly::from_terms(p.terms().map(|(m, c)| {
        let (e, nm) = match v {
            Var::X => (m.degx + 1, Monomial::new(m.degx + 1, m.degy)),
            Var::Y => (m.degy + 1, Monomial::new(m.degx, m.degy + 1)),
        };
        (nm, c / Rat::from_integer(BigInt::from(e)))
    }))
}

impl Add for Derivation {
    type Output = Derivation;
    fn add(self, rhs: Derivation) -> Derivation {
        Derivation::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl<'a> Add<&'a Derivation> for &'a Derivation {
    type Output = Derivation;
    fn add(self, rhs: &'a Derivation) -> Derivation {
        Derivation::new(&self.p + &rhs.p, &self.q + &rhs.q)
    }
}

impl Sub for Derivation {
    type Output = Derivation;
    fn sub(self, rhs: Derivation) -> Derivation {
        Derivation::new(self.p - rhs.p, self.q - rhs.q)
    }
}

impl<'a> Sub<&'a Derivation> for &'a Derivation {
    type Output = Derivation;
    fn sub(self, rhs: &'a Derivation) -> Derivation {
        Derivation::new(&self.p - &rhs.p, &self.q - &rhs.q)
    }
}

impl Neg for Derivation {
    type Output = Derivation;
    fn neg(self) -> Derivation {
        Derivation::new(-self.p, -self.q)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} , {}", self.p, self.q)
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation({self})")
    }
}

/// Nonconstant `a` of least degree with `D(a) = 0`, searched through the
/// polynomials of degree at most `degree_bound` by solving the linear
/// system `D(a) = 0` exactly. Normalized to leading coefficient one and
/// zero constant term.
pub fn kernel_generator(d: &Derivation, degree_bound: u32) -> Result<Poly, DerivationError> {
    if d.is_zero() {
        return Err(DerivationError::ZeroDerivation);
    }
    for deg in 1..=degree_bound {
        // unknowns: monomials of degree 1..=deg, highest first
        let mut unknowns: Vec<Monomial> = (1..=deg)
            .flat_map(|t| (0..=t).map(move |i| Monomial::new(i, t - i)))
            .collect();
        unknowns.sort_by(|a, b| b.cmp(a));
        let images: Vec<Poly> = unknowns
            .iter()
            .map(|m| d.apply(&Poly::monomial(Rat::one(), *m)))
            .collect();
        let mut rows_index: std::collections::BTreeMap<Monomial, usize> = Default::default();
        for img in &images {
            for (m, _) in img.terms() {
                let next = rows_index.len();
                rows_index.entry(*m).or_insert(next);
            }
        }
        let mut rows = vec![vec![Rat::zero(); unknowns.len()]; rows_index.len()];
        for (col, img) in images.iter().enumerate() {
            for (m, c) in img.terms() {
                rows[rows_index[m]][col] = c.clone();
            }
        }
        if let Some(v) = null_space(rows, unknowns.len()).into_iter().next() {
            let a = Poly::from_terms(unknowns.iter().zip(v).map(|(m, c)| (*m, c)));
            return Ok(normalize_generator(&a));
        }
    }
    Err(DerivationError::NoKernelElementWithinBound { bound: degree_bound })
}

/// For nonconstant `h`, the `a` of least degree (leading coefficient one,
/// zero constant term) with `h ∈ K[a]`, together with `f` such that
/// `f(a) = h`.
///
/// For each divisor `d` of `deg h` (smallest first) it builds the unique
/// candidate of degree `d` from the top `d` homogeneous components of `h`:
/// with `h = c a^m + (terms of degree ≤ (m-1)d)` the components of `a`
/// below the top are forced one at a time by exact division by
/// `m · top(a)^(m-1)`. The candidate is then checked with [`express_in`].
pub fn hamiltonian_root(h: &Poly) -> (Poly, UniPoly) {
    let n = h.degree().expect("nonzero");
    assert!(n > 0, "hamiltonian_root needs a nonconstant polynomial");
    let lf = leading_form(h).expect("nonzero");
    if let Some(pp) = &lf.pure_power {
        for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
            let m = n / d;
            if let Some(a) = approximate_root(h, &pp.linear, &pp.coeff, m, d) {
                if let Ok(f) = express_in(h, &a) {
                    return (a, f);
                }
            }
        }
    }
    let a = normalize_generator(h);
    let f = express_in(h, &a).expect("h is linear in its own normalization");
    (a, f)
}

fn approximate_root(h: &Poly, linear: &Poly, c: &Rat, m: u32, d: u32) -> Option<Poly> {
    let top = linear.pow(d);
    let divisor = top.pow(m - 1).scale(&Rat::from_integer(BigInt::from(m)));
    let inv_c = c.recip();
    let mut partial = top;
    for j in 1..d {
        let deg = m * d - j;
        let mut target = h.homogeneous_component(deg).scale(&inv_c);
        target -= partial.pow(m).homogeneous_component(deg);
        let comp = target.div_exact(&divisor)?;
        if !comp.is_zero() && (!comp.is_homogeneous() || comp.degree() != Some(d - j)) {
            return None;
        }
        partial += comp;
    }
    Some(partial)
}

/// Certificate `D = f'(a) D_a` with `(a, witness_mate)` a coordinate pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RentschlerForm {
    pub a: Poly,
    pub f: UniPoly,
    pub witness_mate: Poly,
}

impl RentschlerForm {
    /// `f'(a) · D_a`.
    pub fn reconstruct(&self) -> Derivation {
        Derivation::jacobian(&self.a).mul_poly(&self.f.derivative().eval_poly(&self.a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotLndReason {
    NonzeroDivergence,
    /// `D(h) = c h` for the coordinate function `h` and a nonzero constant.
    EigenvectorFound { h: Poly, c: Rat },
    /// The kernel generator `a` is not a coordinate.
    KernelGeneratorNotCoordinate { a: Poly },
}

impl fmt::Display for NotLndReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotLndReason::NonzeroDivergence => f.write_str("nonzero divergence"),
            NotLndReason::EigenvectorFound { h, c } => write!(f, "D({h}) = {c} * ({h})"),
            NotLndReason::KernelGeneratorNotCoordinate { a } => {
                write!(f, "kernel generator {a} is not a coordinate")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LndVerdict {
    Lnd {
        form: RentschlerForm,
        index_x: usize,
        index_y: usize,
    },
    NotLnd(NotLndReason),
}

impl LndVerdict {
    pub fn is_lnd(&self) -> bool {
        matches!(self, LndVerdict::Lnd { .. })
    }
}

/// Decides whether `D` is locally nilpotent.
///
/// A nonzero divergence refutes directly (reported as an eigenvector
/// `D(x) = cx` or `D(y) = cy` when one exists). Otherwise `D = D_h`, and
/// `D` is locally nilpotent iff `h = f(a)` for a coordinate `a`; the `a`
/// of least degree with `h ∈ K[a]` generates the kernel, and is passed to
/// coordinate rectification.
pub fn is_locally_nilpotent(d: &Derivation) -> LndVerdict {
    if d.is_zero() {
        return LndVerdict::Lnd {
            form: RentschlerForm {
                a: Poly::x(),
                f: UniPoly::zero(),
                witness_mate: Poly::y(),
            },
            index_x: 1,
            index_y: 1,
        };
    }
    let h = match d.hamiltonian() {
        Ok(h) => h,
        Err(_) => return LndVerdict::NotLnd(nonzero_divergence_reason(d)),
    };
    let (a, f) = hamiltonian_root(&h);
    let rho = match rectify_coordinate(&a) {
        Ok(rho) => rho,
        Err(_) => return LndVerdict::NotLnd(NotLndReason::KernelGeneratorNotCoordinate { a }),
    };
    let form = RentschlerForm {
        a,
        f,
        witness_mate: rho.inverse_image_y().clone(),
    };
    LndVerdict::Lnd {
        form,
        index_x: index_from_rectification(rho.image_x()),
        index_y: index_from_rectification(rho.image_y()),
    }
}

// With ρ(a) = x, ρ D ρ^{-1} = g(x) ∂y, so the index of h is one more than
// the y-degree of ρ(h).
fn index_from_rectification(image: &Poly) -> usize {
    image.degree_in(Var::Y).map_or(0, |d| d as usize + 1)
}

fn nonzero_divergence_reason(d: &Derivation) -> NotLndReason {
    for (v, img) in [(Poly::x(), &d.p), (Poly::y(), &d.q)] {
        if let Some(c) = img.div_exact(&v).and_then(|r| r.as_constant()) {
            if !c.is_zero() {
                return NotLndReason::EigenvectorFound { h: v, c };
            }
        }
    }
    NotLndReason::NonzeroDivergence
}

pub fn rentschler_decompose(d: &Derivation) -> Result<RentschlerForm, DerivationError> {
    match is_locally_nilpotent(d) {
        LndVerdict::Lnd { form, .. } => {
            assert_eq!(&form.reconstruct(), d, "Rentschler certificate must reconstruct its derivation");
            Ok(form)
        }
        LndVerdict::NotLnd(reason) => Err(DerivationError::NotLocallyNilpotent(reason)),
    }
}

/// Least `k ≤ cap` with `[D1, D2, ..., D2] = 0` (`k` copies of `D2`).
pub fn engel_chain(d1: &Derivation, d2: &Derivation, cap: usize) -> Result<usize, DerivationError> {
    let mut cur = d1.clone();
    for k in 1..=cap {
        cur = cur.bracket(d2);
        if cur.is_zero() {
            return Ok(k);
        }
    }
    Err(DerivationError::CapExceeded { cap })
}

/// `[f, g, ..., g]` with `k` copies of `g`, bracketing by the Jacobian.
pub fn iterated_jacobian(f: &Poly, g: &Poly, k: usize) -> Poly {
    (0..k).fold(f.clone(), |acc, _| jacobian_det(&acc, g))
}
