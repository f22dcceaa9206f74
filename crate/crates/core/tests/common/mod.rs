#![allow(dead_code)]

use planar_lnd::random::{random_automorphism, random_triangular_generators, ChainBounds};
use planar_lnd::{Derivation, Monomial, Poly, PolyAut, Rat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Polynomials of total degree at most `max_degree` with coefficients in
/// {-9..9}/{1..9} and at most `max_terms` terms.
pub fn poly(max_degree: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((0..=max_degree, 0..=max_degree, -9i64..=9, 1i64..=9), 0..=max_terms).prop_map(
        move |terms| {
            Poly::from_terms(
                terms
                    .into_iter()
                    .filter(|(i, j, _, _)| i + j <= max_degree)
                    .map(|(i, j, n, d)| (Monomial::new(i, j), Rat::new(n.into(), d.into()))),
            )
        },
    )
}

pub fn derivation(max_degree: u32, max_terms: usize) -> impl Strategy<Value = Derivation> {
    (poly(max_degree, max_terms), poly(max_degree, max_terms)).prop_map(|(p, q)| Derivation::new(p, q))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn automorphism(seed: u64, bounds: &ChainBounds) -> PolyAut {
    random_automorphism(&mut rng(seed), bounds)
}

/// A conjugated triangular algebra and the conjugating automorphism.
pub fn conjugated_algebra(seed: u64, bounds: &ChainBounds) -> (PolyAut, Vec<Derivation>) {
    let mut r = rng(seed);
    let theta = random_automorphism(&mut r, bounds);
    let gens = random_triangular_generators(&mut r, 4, 5);
    let conj = gens.iter().map(|g| theta.conjugate(g)).collect();
    (theta, conj)
}

/// Smaller automorphisms for cases run many times.
pub fn light_bounds() -> ChainBounds {
    ChainBounds {
        max_len: 4,
        max_shear_degree: 3,
        max_degree: 6,
    }
}

/// Fixed-seed configuration so every run draws the same cases.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x5eed_2024),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}
