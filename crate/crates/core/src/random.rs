//! Random polynomials, automorphisms and triangular algebras for property
//! tests and fuzzing.

use rand::Rng;

use crate::automorphism::{ElementaryMap, PolyAut};
use crate::derivation::Derivation;
use crate::polyring::{Monomial, Poly, Rat};

/// Uniform on `n/d` with `n ∈ -9..=9`, `d ∈ 1..=9`.
pub fn small_rat<R: Rng>(rng: &mut R) -> Rat {
    Rat::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=9).into())
}

/// Every monomial of degree at most `max_degree` gets a [`small_rat`]
/// coefficient with probability `density`.
pub fn random_poly<R: Rng>(rng: &mut R, max_degree: u32, density: f64) -> Poly {
    let mut terms = Vec::new();
    for d in 0..=max_degree {
        for i in 0..=d {
            if rng.gen_bool(density) {
                terms.push((Monomial::new(i, d - i), small_rat(rng)));
            }
        }
    }
    Poly::from_terms(terms)
}

/// A random polynomial in `x` alone.
pub fn random_univariate<R: Rng>(rng: &mut R, max_degree: u32, density: f64) -> Poly {
    let mut terms = Vec::new();
    for i in 0..=max_degree {
        if rng.gen_bool(density) {
            terms.push((Monomial::new(i, 0), small_rat(rng)));
        }
    }
    Poly::from_terms(terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainBounds {
    pub max_len: usize,
    pub max_shear_degree: u32,
    /// Chains whose images exceed this total degree are redrawn.
    pub max_degree: u32,
}

impl Default for ChainBounds {
    fn default() -> Self {
        ChainBounds {
            max_len: 4,
            max_shear_degree: 3,
            max_degree: 9,
        }
    }
}

fn small_nonzero<R: Rng>(rng: &mut R) -> Rat {
    let n = loop {
        let n = rng.gen_range(-3..=3);
        if n != 0 {
            break n;
        }
    };
    Rat::new(n.into(), rng.gen_range(1..=2).into())
}

fn random_elementary<R: Rng>(rng: &mut R, bounds: &ChainBounds) -> ElementaryMap {
    match rng.gen_range(0..3) {
        0 => loop {
            let mut entry = || Rat::from_integer(rng.gen_range(-2..=2).into());
            let m = [[entry(), entry()], [entry(), entry()]];
            let t = [entry(), entry()];
            if let Ok(e) = ElementaryMap::affine(m, t) {
                break e;
            }
        },
        1 => ElementaryMap::ShearX {
            c: small_nonzero(rng),
            k: rng.gen_range(1..=bounds.max_shear_degree),
        },
        _ => ElementaryMap::ShearY {
            c: small_nonzero(rng),
            k: rng.gen_range(1..=bounds.max_shear_degree),
        },
    }
}

/// A random tame automorphism within `bounds`.
pub fn random_automorphism<R: Rng>(rng: &mut R, bounds: &ChainBounds) -> PolyAut {
    loop {
        let len = rng.gen_range(1..=bounds.max_len);
        let chain: Vec<ElementaryMap> = (0..len).map(|_| random_elementary(rng, bounds)).collect();
        let theta = PolyAut::from_chain(chain);
        let deg = theta.image_x().degree().max(theta.image_y().degree()).unwrap_or(0);
        if deg <= bounds.max_degree {
            return theta;
        }
    }
}

/// Generators `α ∂x + β(x) ∂y` of a random subalgebra of `u2`.
pub fn random_triangular_generators<R: Rng>(rng: &mut R, max_generators: usize, max_degree: u32) -> Vec<Derivation> {
    let count = rng.gen_range(1..=max_generators);
    (0..count)
        .map(|_| {
            let alpha = if rng.gen_bool(0.5) { small_rat(rng) } else { Rat::from_integer(0.into()) };
            let beta = random_univariate(rng, max_degree, 0.5);
            Derivation::new(Poly::constant(alpha), beta)
        })
        .collect()
}

/// A random coordinate polynomial `θ(x)`.
pub fn random_coordinate<R: Rng>(rng: &mut R, bounds: &ChainBounds) -> Poly {
    random_automorphism(rng, bounds).image_x().clone()
}

/// `θ L θ^{-1}` for random `θ` and random triangular generators `L`.
pub fn random_conjugated_algebra<R: Rng>(
    rng: &mut R,
    max_generators: usize,
    max_degree: u32,
    bounds: &ChainBounds,
) -> (PolyAut, Vec<Derivation>) {
    let theta = random_automorphism(rng, bounds);
    let gens = random_triangular_generators(rng, max_generators, max_degree);
    let conj = gens.iter().map(|g| theta.conjugate(g)).collect();
    (theta, conj)
}
