//! Conjugating a Lie algebra of locally nilpotent derivations into the
//! triangular algebra `u2 = { α ∂x + β(x) ∂y }`.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::automorphism::{rectify_coordinate, rectify_pair, AutError, ElementaryMap, PolyAut};
use crate::derivation::{is_locally_nilpotent, rentschler_decompose, Derivation, LndVerdict, NotLndReason};
use crate::lie::{is_constant_field, lie_closure, rank_over_a, span_reduce, LieBasis, DEFAULT_DIM_CAP};
use crate::polyring::{Monomial, Poly, Rat, Var};

/// Bound on the length of the bracket chain `D_{k+1} = [D_k, D_1]`.
pub const ENGEL_CAP: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    Zero,
    RankOneAbelian,
    RankTwoAbelian,
    RankTwoNonabelian,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Zero => "zero",
            Case::RankOneAbelian => "rank-one-abelian",
            Case::RankTwoAbelian => "rank-two-abelian",
            Case::RankTwoNonabelian => "rank-two-nonabelian",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Closure,
    CommutingPair,
    Rectification,
    LinearElement,
    SquareForm,
    NormalForm,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Closure => "closure",
            Stage::CommutingPair => "commuting pair",
            Stage::Rectification => "rectification",
            Stage::LinearElement => "linear element",
            Stage::SquareForm => "square form",
            Stage::NormalForm => "normal form",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TriangularError {
    #[error("{witness} is not locally nilpotent: {reason}")]
    NotLocallyNilpotent { witness: Derivation, reason: NotLndReason },
    #[error("algebra has rank below two over the polynomial ring")]
    RankDeficient,
    #[error("degenerate step at {stage}: {detail}")]
    Degenerate { stage: Stage, detail: String },
}

fn degenerate(stage: Stage, detail: impl Into<String>) -> TriangularError {
    TriangularError::Degenerate {
        stage,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("not the square of a linear form: {0}")]
pub struct NotASquare(pub Poly);

/// `p` constant and `q` free of `y`.
pub fn is_triangular(d: &Derivation) -> bool {
    d.p.is_constant() && d.q.degree_in(Var::Y).unwrap_or(0) == 0
}

/// Writes a homogeneous quadratic `h` as `c l^2` with `l` linear and
/// leading coefficient one.
pub fn linear_square_form(h: &Poly) -> Result<(Poly, Rat), NotASquare> {
    let fail = || NotASquare(h.clone());
    if h.is_zero() || h.degree() != Some(2) || !h.is_homogeneous() {
        return Err(fail());
    }
    let a = h.coeff(&Monomial::new(2, 0));
    let b = h.coeff(&Monomial::new(1, 1));
    let c = h.coeff(&Monomial::new(0, 2));
    let four = Rat::from_integer(4.into());
    if !(&b * &b - four * &a * &c).is_zero() {
        return Err(fail());
    }
    if a.is_zero() {
        return Ok((Poly::y(), c));
    }
    let nu = &b / (&a + &a);
    let l = &Poly::x() + &Poly::y().scale(&nu);
    Ok((l, a))
}

/// Two commuting derivations, independent over `K[x, y]`, with
/// `D1 ∈ K D_a`, `D2 ∈ K D_c` and `[a, c]` a nonzero constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingPair {
    pub d1: Derivation,
    pub d2: Derivation,
    pub a: Poly,
    pub c: Poly,
}

/// Finds a commuting pair in a rank-two algebra of locally nilpotent
/// derivations. Basis pairs are scanned first; otherwise the first
/// independent pair is fed to [`commuting_pair_from`].
pub fn commuting_independent_pair(basis: &LieBasis) -> Result<CommutingPair, TriangularError> {
    if rank_over_a(basis) < 2 {
        return Err(TriangularError::RankDeficient);
    }
    let rows = basis.basis();
    let mut first = None;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if rows[i].wronskian(&rows[j]).is_zero() {
                continue;
            }
            if rows[i].bracket(&rows[j]).is_zero() {
                return pair_certificate(&rows[i], &rows[j]);
            }
            first.get_or_insert((i, j));
        }
    }
    let (i, j) = first.expect("rank two has an independent pair");
    commuting_pair_from(&rows[i], &rows[j])
}

/// Builds commuting independent elements from independent `D1`, `D2` of a
/// nilpotent algebra of locally nilpotent derivations.
///
/// `D_{k+1} = [D_k, D1]` starting from `D2` ends at a last nonzero `D_s`.
/// If `D_s` is independent of `D1` the pair is `(D1, D_s)`. Otherwise, with
/// `D1 = f'(a) D_a` and `m = deg f`, the pair is
/// `([D1, D_{s-1}, ..., D_{s-1}], D_{s-1})` with `m - 1` copies.
pub fn commuting_pair_from(d1: &Derivation, d2: &Derivation) -> Result<CommutingPair, TriangularError> {
    let mut prev = d1.clone();
    let mut cur = d2.clone();
    let mut steps = 0;
    loop {
        let next = cur.bracket(d1);
        if next.is_zero() {
            break;
        }
        steps += 1;
        if steps > ENGEL_CAP {
            return Err(degenerate(Stage::CommutingPair, format!("bracket chain longer than {ENGEL_CAP}")));
        }
        prev = std::mem::replace(&mut cur, next);
    }
    if !cur.wronskian(d1).is_zero() {
        return pair_certificate(d1, &cur);
    }
    if steps == 0 {
        return Err(degenerate(Stage::CommutingPair, "D2 commutes with D1 but is dependent on it"));
    }
    let form = rentschler_decompose(d1).map_err(|e| degenerate(Stage::CommutingPair, e.to_string()))?;
    let m = form.f.degree().unwrap_or(0);
    if m == 0 {
        return Err(degenerate(Stage::CommutingPair, "D1 is zero"));
    }
    let mut tilde = d1.clone();
    for _ in 1..m {
        tilde = tilde.bracket(&prev);
    }
    if !tilde.bracket(&prev).is_zero() || tilde.wronskian(&prev).is_zero() {
        return Err(degenerate(
            Stage::CommutingPair,
            format!("repaired pair ({tilde}) and ({prev}) is not commuting and independent"),
        ));
    }
    pair_certificate(&tilde, &prev)
}

fn pair_certificate(d1: &Derivation, d2: &Derivation) -> Result<CommutingPair, TriangularError> {
    let kernel = |d: &Derivation| {
        rentschler_decompose(d)
            .map(|f| f.a)
            .map_err(|e| degenerate(Stage::CommutingPair, e.to_string()))
    };
    let a = kernel(d1)?;
    let c = kernel(d2)?;
    match crate::polyring::jacobian_det(&a, &c).as_constant() {
        Some(j) if !j.is_zero() => Ok(CommutingPair {
            d1: d1.clone(),
            d2: d2.clone(),
            a,
            c,
        }),
        _ => Err(degenerate(
            Stage::CommutingPair,
            format!("kernel generators {a} and {c} do not form a coordinate pair"),
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularizationResult {
    pub theta: PolyAut,
    /// `θ D θ^{-1}` for each basis element `D` of the closure.
    pub images: Vec<Derivation>,
    pub case: Case,
    pub verified: bool,
    pub closure: LieBasis,
}

fn lnd_check(d: &Derivation) -> Result<(), TriangularError> {
    match is_locally_nilpotent(d) {
        LndVerdict::Lnd { .. } => Ok(()),
        LndVerdict::NotLnd(reason) => Err(TriangularError::NotLocallyNilpotent {
            witness: d.clone(),
            reason,
        }),
    }
}

fn rect_err(e: AutError) -> TriangularError {
    degenerate(Stage::Rectification, e.to_string())
}

/// Finds `θ` with `θ L θ^{-1} ⊆ u2`, where `L` is the Lie algebra
/// generated by `generators`.
pub fn triangularize(generators: &[Derivation]) -> Result<TriangularizationResult, TriangularError> {
    for g in generators {
        lnd_check(g)?;
    }
    let report = lie_closure(generators, DEFAULT_DIM_CAP);
    if report.capped {
        return Err(degenerate(
            Stage::Closure,
            format!("closure exceeded dimension {DEFAULT_DIM_CAP}"),
        ));
    }
    let basis = report.basis;
    for d in basis.basis() {
        lnd_check(d)?;
    }
    let (theta, case) = match rank_over_a(&basis) {
        0 => (PolyAut::identity(), Case::Zero),
        1 => {
            let d = basis.basis().iter().find(|d| !d.is_zero()).expect("rank one");
            let form = rentschler_decompose(d).map_err(|e| degenerate(Stage::Rectification, e.to_string()))?;
            (rectify_coordinate(&form.a).map_err(rect_err)?, Case::RankOneAbelian)
        }
        _ => {
            let pair = commuting_independent_pair(&basis)?;
            // either kernel generator may be sent to x; keep the shorter chain
            let phi = match (rectify_pair(&pair.a, &pair.c), rectify_pair(&pair.c, &pair.a)) {
                (Ok(p), Ok(q)) if q.chain().len() < p.chain().len() => q,
                (Ok(p), _) => p,
                (Err(_), Ok(q)) => q,
                (Err(e), Err(_)) => return Err(rect_err(e)),
            };
            if basis.dim() <= 2 {
                (phi, Case::RankTwoAbelian)
            } else {
                let psi = linear_element_map(&phi, &basis)?;
                (phi.then(&psi), Case::RankTwoNonabelian)
            }
        }
    };
    let images: Vec<Derivation> = basis.basis().iter().map(|d| theta.conjugate(d)).collect();
    if let Some(bad) = images.iter().find(|d| !is_triangular(d)) {
        return Err(degenerate(Stage::NormalForm, format!("image {bad} is not triangular")));
    }
    let back = theta.invert();
    let reconstructed: Vec<Derivation> = images.iter().map(|d| back.conjugate(d)).collect();
    let verified = span_reduce(&reconstructed).basis() == basis.basis();
    Ok(TriangularizationResult {
        theta,
        images,
        case,
        verified,
        closure: basis,
    })
}

// After φ the algebra contains ∂x and ∂y. Differentiating a non-constant
// element down to linear coefficients gives D_h with h = c l^2; the
// returned ψ sends l to x, turning that element into a multiple of x ∂y.
fn linear_element_map(phi: &PolyAut, basis: &LieBasis) -> Result<PolyAut, TriangularError> {
    let images: Vec<Derivation> = basis.basis().iter().map(|d| phi.conjugate(d)).collect();
    let span = span_reduce(&images);
    if !span.contains(&Derivation::dx()) || !span.contains(&Derivation::dy()) {
        return Err(degenerate(Stage::LinearElement, "∂x, ∂y not in the rectified algebra"));
    }
    let e = images
        .iter()
        .find(|d| !is_constant_field(d))
        .ok_or_else(|| degenerate(Stage::LinearElement, "all elements have constant coefficients"))?;
    let lin = reduce_to_linear(e);
    let stripped = Derivation::new(
        &lin.p - &Poly::constant(lin.p.constant_term()),
        &lin.q - &Poly::constant(lin.q.constant_term()),
    );
    if !stripped.divergence().is_zero() {
        return Err(degenerate(Stage::LinearElement, format!("linear element {stripped} has nonzero divergence")));
    }
    let h = stripped
        .hamiltonian()
        .map_err(|e| degenerate(Stage::LinearElement, e.to_string()))?;
    let (l, _) = linear_square_form(&h).map_err(|e| degenerate(Stage::SquareForm, e.to_string()))?;
    let mu = l.coeff(&Monomial::X);
    let mate = if mu.is_zero() {
        -Poly::x()
    } else {
        Poly::y().scale(&mu.recip())
    };
    let tau = ElementaryMap::affine(
        [[mu.clone(), l.coeff(&Monomial::Y)], [mate.coeff(&Monomial::X), mate.coeff(&Monomial::Y)]],
        [Rat::zero(), Rat::zero()],
    )
    .map_err(rect_err)?;
    if tau.is_identity() {
        return Ok(PolyAut::identity());
    }
    Ok(PolyAut::from_chain(vec![tau.inverse()]))
}

// Applies ∂x^i' ∂y^j' (as brackets with ∂x, ∂y) so the top monomial
// x^i y^j of the coefficients drops to degree one, x first.
fn reduce_to_linear(e: &Derivation) -> Derivation {
    let n = e.degree().unwrap_or(0);
    if n <= 1 {
        return e.clone();
    }
    let top = [e.p.leading_term(), e.q.leading_term()]
        .into_iter()
        .flatten()
        .map(|(m, _)| *m)
        .max()
        .expect("nonzero");
    let ix = top.degx.min(n - 1);
    let iy = n - 1 - ix;
    Derivation::new(e.p.partial_n(ix, iy), e.q.partial_n(ix, iy))
}

/// Checks `θ D_i θ^{-1} = E_i` for all `i`, and that the span of the `E_i`
/// is a subalgebra of `u2`.
pub fn verify_conjugation(theta: &PolyAut, original: &[Derivation], images: &[Derivation]) -> bool {
    if original.len() != images.len() {
        return false;
    }
    if original.iter().zip(images).any(|(d, e)| theta.conjugate(d) != *e) {
        return false;
    }
    if !images.iter().all(is_triangular) {
        return false;
    }
    let span = span_reduce(images);
    let rows = span.basis();
    (0..rows.len()).all(|i| (i + 1..rows.len()).all(|j| span.contains(&rows[i].bracket(&rows[j]))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

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
    fn triangular_examples() {
        assert!(is_triangular(&d(Poly::one(), x().pow(3))));
        assert!(!is_triangular(&d(y(), Poly::zero())));
        assert!(is_triangular(&Derivation::zero()));
    }

    #[test]
    fn square_form_examples() {
        let h = (&x() + &y()).pow(2);
        assert_eq!(linear_square_form(&h).unwrap(), (&x() + &y(), rat(1, 1)));
        assert_eq!(linear_square_form(&x().pow(2).scale(&rat(2, 1))).unwrap(), (x(), rat(2, 1)));
        assert!(linear_square_form(&(&x() * &y())).is_err());
        assert_eq!(linear_square_form(&y().pow(2).scale(&rat(-3, 1))).unwrap(), (y(), rat(-3, 1)));
    }

    #[test]
    fn commuting_pair_examples() {
        let r = lie_closure(&[d(y(), Poly::zero()), Derivation::dy()], 64);
        assert_eq!(r.dimension, 3);
        let pair = commuting_independent_pair(&r.basis).unwrap();
        assert!(pair.d1.bracket(&pair.d2).is_zero());
        let dims = span_reduce(&[pair.d1.clone(), pair.d2.clone()]);
        assert_eq!(dims, span_reduce(&[Derivation::dx(), Derivation::dy()]));

        let basis = span_reduce(&[Derivation::dx(), Derivation::dy()]);
        let pair = commuting_independent_pair(&basis).unwrap();
        let j = crate::polyring::jacobian_det(&pair.a, &pair.c);
        assert!(j.as_constant().is_some_and(|c| !c.is_zero()));

        let basis = span_reduce(&[Derivation::dy(), d(Poly::zero(), x())]);
        assert_eq!(commuting_independent_pair(&basis), Err(TriangularError::RankDeficient));
    }

    #[test]
    fn chain_reaches_independent_element() {
        let pair = commuting_pair_from(&Derivation::dx(), &d(Poly::zero(), x().pow(2))).unwrap();
        assert!(pair.d1.bracket(&pair.d2).is_zero());
        assert_eq!(span_reduce(&[pair.d2.clone()]), span_reduce(&[Derivation::dy()]));
    }

    #[test]
    fn repair_path() {
        // D1 = x ∂y, D2 = ∂x: the chain ends at ∂y, which is dependent on D1
        let pair = commuting_pair_from(&d(Poly::zero(), x()), &Derivation::dx()).unwrap();
        assert!(pair.d1.bracket(&pair.d2).is_zero());
        assert!(!pair.d1.wronskian(&pair.d2).is_zero());
        assert_eq!(span_reduce(&[pair.d1.clone()]), span_reduce(&[Derivation::dy()]));
        assert_eq!(pair.d2, Derivation::dx());
    }

    #[test]
    fn already_triangular() {
        let gens = [Derivation::dy(), d(Poly::zero(), x()), Derivation::dx()];
        let r = triangularize(&gens).unwrap();
        assert!(r.theta.is_identity());
        assert_eq!(r.case, Case::RankTwoNonabelian);
        assert!(r.verified);
    }

    #[test]
    fn recovers_from_shear() {
        let theta0 = PolyAut::from_chain(vec![ElementaryMap::shear_x(rat(1, 1), 2).unwrap()]);
        let gens: Vec<Derivation> = [Derivation::dy(), Derivation::dx(), d(Poly::zero(), x())]
            .iter()
            .map(|g| theta0.conjugate(g))
            .collect();
        assert_eq!(gens[0], d(y().scale(&rat(-2, 1)), Poly::one()));
        let r = triangularize(&gens).unwrap();
        assert!(r.verified);
        assert!(r.images.iter().all(is_triangular));
        let span = span_reduce(&r.images);
        for e in [Derivation::dx(), Derivation::dy(), d(Poly::zero(), x())] {
            assert!(span.contains(&e));
        }
    }

    #[test]
    fn rank_one_and_zero() {
        let theta0 = PolyAut::from_chain(vec![ElementaryMap::swap(), ElementaryMap::shear_y(rat(2, 1), 3).unwrap()]);
        let gens: Vec<Derivation> = [Derivation::dy(), d(Poly::zero(), x().pow(2))]
            .iter()
            .map(|g| theta0.conjugate(g))
            .collect();
        let r = triangularize(&gens).unwrap();
        assert_eq!(r.case, Case::RankOneAbelian);
        assert!(r.verified);
        for e in &r.images {
            assert!(e.p.is_zero() && is_triangular(e));
        }
        let r = triangularize(&[]).unwrap();
        assert_eq!(r.case, Case::Zero);
        assert!(r.verified);
    }

    #[test]
    fn rejects_non_lnd() {
        let err = triangularize(&[d(x(), -y())]).unwrap_err();
        assert!(matches!(err, TriangularError::NotLocallyNilpotent { .. }));
    }

    #[test]
    fn verify_examples() {
        let gens = [Derivation::dx(), d(Poly::zero(), x()), Derivation::dy()];
        assert!(verify_conjugation(&PolyAut::identity(), &gens, &gens));
        // not closed: [∂x, x ∂y] = ∂y is missing
        assert!(!verify_conjugation(&PolyAut::identity(), &gens[..2], &gens[..2]));
        let swap = PolyAut::from_chain(vec![ElementaryMap::swap()]);
        assert!(verify_conjugation(&swap, &[Derivation::dx()], &[Derivation::dy()]));
        assert!(!verify_conjugation(&swap, &[Derivation::dx()], &[Derivation::dx()]));
    }
}
