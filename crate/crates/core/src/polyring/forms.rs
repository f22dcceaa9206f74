use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Monomial, Poly, PolyError, Rat, UniPoly};

/// `form = coeff * linear^exponent` with `linear` a rational linear form of
/// leading coefficient one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurePower {
    pub linear: Poly,
    pub coeff: Rat,
    pub exponent: u32,
}

/// Top homogeneous component of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingForm {
    pub degree: u32,
    pub form: Poly,
    pub pure_power: Option<PurePower>,
}

pub fn leading_form(p: &Poly) -> Result<LeadingForm, PolyError> {
    let degree = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    let form = p.homogeneous_component(degree);
    let pure_power = pure_power_of_form(&form, degree);
    Ok(LeadingForm {
        degree,
        form,
        pure_power,
    })
}

/// Detects `form = c * (x + βy)^n` or `form = c * y^n` for a homogeneous
/// form of degree `n ≥ 1`.
///
/// Setting `y = 1` leaves `c (t + β)^n`, which has an `n`-fold root exactly
/// when `β` equals the subleading coefficient over `n c`. That `β` is
/// rational whenever the form is rational, so no extension is needed.
pub fn pure_power_of_form(form: &Poly, n: u32) -> Option<PurePower> {
    if n == 0 || form.is_zero() {
        return None;
    }
    let cx = form.coeff(&Monomial::new(n, 0));
    if cx.is_zero() {
        // only c*y^n remains possible
        return match form.terms().collect::<Vec<_>>().as_slice() {
            [(m, c)] if **m == Monomial::new(0, n) => Some(PurePower {
                linear: Poly::y(),
                coeff: (*c).clone(),
                exponent: n,
            }),
            _ => None,
        };
    }
    let sub = form.coeff(&Monomial::new(n - 1, 1));
    let beta = sub / (&cx * Rat::from_integer(BigInt::from(n)));
    let linear = &Poly::x() + &Poly::y().scale(&beta);
    let candidate = binomial_power(&beta, n).scale(&cx);
    (candidate == *form).then_some(PurePower {
        linear,
        coeff: cx,
        exponent: n,
    })
}

// (x + βy)^n expanded termwise.
fn binomial_power(beta: &Rat, n: u32) -> Poly {
    let mut terms = Vec::with_capacity(n as usize + 1);
    let mut binom = BigInt::one();
    let mut bpow = Rat::one();
    for k in 0..=n {
        terms.push((Monomial::new(n - k, k), Rat::from_integer(binom.clone()) * &bpow));
        binom = binom * (n - k) / (k + 1);
        bpow *= beta;
    }
    Poly::from_terms(terms)
}

/// Finds `f` with `f(a) = g` by eliminating leading terms against powers of
/// `a`.
pub fn express_in(g: &Poly, a: &Poly) -> Result<UniPoly, PolyError> {
    let da = match a.degree() {
        Some(d) if d > 0 => d,
        _ => return Err(PolyError::ConstantGenerator),
    };
    let (lm_a, lc_a) = {
        let (m, c) = a.leading_term().expect("nonconstant");
        (*m, c.clone())
    };
    let mut rem = g.clone();
    let mut coeffs: Vec<Rat> = Vec::new();
    let mut powers: Vec<Poly> = vec![Poly::one()];
    while let Some(deg) = rem.degree() {
        if deg == 0 {
            set_coeff(&mut coeffs, 0, rem.constant_term());
            break;
        }
        if deg % da != 0 {
            return Err(PolyError::NotInSubalgebra);
        }
        let k = (deg / da) as usize;
        let (lm, lc) = rem.leading_term().expect("nonzero");
        let target = Monomial::new(lm_a.degx * k as u32, lm_a.degy * k as u32);
        if *lm != target {
            return Err(PolyError::NotInSubalgebra);
        }
        let r = lc / num_traits::pow(lc_a.clone(), k);
        while powers.len() <= k {
            let next = powers.last().unwrap() * a;
            powers.push(next);
        }
        rem.add_scaled(&powers[k], &-r.clone());
        set_coeff(&mut coeffs, k, r);
    }
    Ok(UniPoly::new(coeffs))
}

fn set_coeff(coeffs: &mut Vec<Rat>, k: usize, v: Rat) {
    if coeffs.len() <= k {
        coeffs.resize(k + 1, Rat::zero());
    }
    coeffs[k] += v;
}

/// Shifts and scales a nonconstant polynomial to zero constant term and
/// leading coefficient one.
pub fn normalize_generator(a: &Poly) -> Poly {
    let mut out = a.clone();
    out -= Poly::constant(a.constant_term());
    match out.leading_coeff().cloned() {
        Some(lc) if !lc.is_one() => out.scale(&lc.recip()),
        _ => out,
    }
}
