//! Randomized end-to-end checks.
//!
//! Each case draws a random subalgebra of `u2`, conjugates it by a random
//! tame automorphism and asks the triangularizer to undo that. It also checks
//! the bracket identities on random polynomials. Cases run in parallel; the
//! report is assembled in case order, so output depends only on the seed.

use planar_lnd::derivation::iterated_jacobian;
use planar_lnd::polyring::jacobian_det;
use planar_lnd::random::{random_automorphism, random_poly, random_triangular_generators, ChainBounds};
use planar_lnd::triangular::{is_triangular, triangularize, TriangularError};
use planar_lnd::{Derivation, Poly, PolyAut};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::document::{AutJson, DerivationJson};

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_degree: u32,
    pub max_generators: usize,
    pub inject_non_lnd: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub theta: AutJson,
    /// Triangular generators before conjugation.
    pub triangular: Vec<DerivationJson>,
    pub conjugated: Vec<DerivationJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub case: usize,
    pub case_seed: u64,
    pub property: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// Cases with an injected non-LND generator that were correctly refused.
    pub expected_negative: usize,
    pub failures: Vec<Failure>,
}

impl FuzzReport {
    pub fn summary(&self) -> String {
        let mut out = format!(
            "seed {}: {} cases, {} passed, {} failed",
            self.seed, self.cases, self.passed, self.failed
        );
        if self.expected_negative > 0 {
            out.push_str(&format!(" ({} refused as expected)", self.expected_negative));
        }
        out.push('\n');
        for f in &self.failures {
            out.push_str(&format!("case {} (seed {}): {}: {}\n", f.case, f.case_seed, f.property, f.detail));
            if let Some(c) = &f.counterexample {
                out.push_str(&format!("  theta(x) = {}\n  theta(y) = {}\n", c.theta.image_x, c.theta.image_y));
                for d in &c.conjugated {
                    out.push_str(&format!("  {} , {}\n", d.p, d.q));
                }
            }
        }
        out
    }
}

/// One recovery instance: `θ` and the triangular generators it conjugates.
#[derive(Clone, Debug)]
struct Instance {
    theta: PolyAut,
    triangular: Vec<Derivation>,
    /// Appended after conjugation; the triangularizer must refuse it.
    poison: Option<Derivation>,
}

impl Instance {
    fn conjugated(&self) -> Vec<Derivation> {
        let mut gens: Vec<Derivation> = self.triangular.iter().map(|d| self.theta.conjugate(d)).collect();
        gens.extend(self.poison.iter().cloned());
        gens
    }

    fn counterexample(&self) -> Counterexample {
        Counterexample {
            theta: AutJson::from(&self.theta),
            triangular: self.triangular.iter().map(DerivationJson::from).collect(),
            conjugated: self.conjugated().iter().map(DerivationJson::from).collect(),
        }
    }

    /// Smaller variants: one generator fewer, a top term of some `β`
    /// dropped, one map fewer in the chain.
    fn shrink_candidates(&self) -> Vec<Instance> {
        let mut out = Vec::new();
        if self.triangular.len() > 1 {
            for i in 0..self.triangular.len() {
                let mut c = self.clone();
                c.triangular.remove(i);
                out.push(c);
            }
        }
        for i in 0..self.triangular.len() {
            let q = &self.triangular[i].q;
            if let Some((m, _)) = q.leading_term() {
                let mut c = self.clone();
                let truncated = Poly::from_terms(q.terms().filter(|(n, _)| *n != m).map(|(n, r)| (*n, r.clone())));
                c.triangular[i] = Derivation::new(self.triangular[i].p.clone(), truncated);
                out.push(c);
            }
        }
        let chain = self.theta.chain();
        for i in 0..chain.len() {
            let mut shorter = chain.to_vec();
            shorter.remove(i);
            let mut c = self.clone();
            c.theta = PolyAut::from_chain(shorter);
            out.push(c);
        }
        out
    }
}

enum Verdict {
    Pass,
    Refused,
    Fail(String),
}

fn check_recovery(inst: &Instance) -> Verdict {
    let gens = inst.conjugated();
    match triangularize(&gens) {
        Ok(r) => {
            if inst.poison.is_some() {
                return Verdict::Fail("a non-LND generator was accepted".to_string());
            }
            if !r.verified {
                return Verdict::Fail(format!("{} result did not verify", r.case));
            }
            if let Some(e) = r.images.iter().find(|e| !is_triangular(e)) {
                return Verdict::Fail(format!("image {e} is not triangular"));
            }
            Verdict::Pass
        }
        Err(TriangularError::NotLocallyNilpotent { witness, reason }) => {
            if inst.poison.as_ref() == Some(&witness) {
                Verdict::Refused
            } else {
                Verdict::Fail(format!("generator {witness} rejected: {reason}"))
            }
        }
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

fn shrink(mut inst: Instance) -> (Instance, String) {
    let mut detail = match check_recovery(&inst) {
        Verdict::Fail(d) => d,
        _ => unreachable!("shrink starts from a failing instance"),
    };
    'outer: loop {
        for c in inst.shrink_candidates() {
            if let Verdict::Fail(d) = check_recovery(&c) {
                inst = c;
                detail = d;
                continue 'outer;
            }
        }
        return (inst, detail);
    }
}

/// Divergence-nonzero or eigenvector-carrying fields, none locally nilpotent.
fn non_lnd<R: Rng>(rng: &mut R) -> Derivation {
    let (x, y) = (Poly::x(), Poly::y());
    match rng.gen_range(0..4) {
        0 => Derivation::new(x, Poly::zero()),
        1 => Derivation::new(Poly::zero(), y),
        2 => Derivation::new(x, -y),
        _ => Derivation::new(y, x),
    }
}

fn identity_failures<R: Rng>(rng: &mut R, max_degree: u32) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let f = random_poly(rng, max_degree, 0.5);
    let g = random_poly(rng, max_degree, 0.5);
    let (df, dg) = (Derivation::jacobian(&f), Derivation::jacobian(&g));
    if df.bracket(&dg) != Derivation::jacobian(&jacobian_det(&f, &g)) {
        out.push(("jacobian-bracket".to_string(), format!("f = {f}, g = {g}")));
    }

    let a = random_poly(rng, max_degree, 0.5);
    let b = random_poly(rng, max_degree, 0.5);
    let d1 = Derivation::new(random_poly(rng, max_degree, 0.5), random_poly(rng, max_degree, 0.5));
    let d2 = Derivation::new(random_poly(rng, max_degree, 0.5), random_poly(rng, max_degree, 0.5));
    let lhs = d1.mul_poly(&a).bracket(&d2.mul_poly(&b));
    let rhs = d1.bracket(&d2).mul_poly(&(&a * &b)) + d2.mul_poly(&(&a * &d1.apply(&b)))
        - d1.mul_poly(&(&b * &d2.apply(&a)));
    if lhs != rhs {
        out.push(("bracket-of-multiples".to_string(), format!("a = {a}, b = {b}, D1 = {d1}, D2 = {d2}")));
    }

    let mut chain = df.clone();
    for k in 1..=5usize {
        chain = chain.bracket(&dg);
        let h = iterated_jacobian(&f, &g, k);
        let sign = if k % 2 == 0 { Poly::one() } else { -Poly::one() };
        if chain != Derivation::jacobian(&h) || h != &sign * &dg.iterate(&f, k) {
            out.push(("engel".to_string(), format!("k = {k}, f = {f}, g = {g}")));
            break;
        }
    }
    out
}

fn run_case(case: usize, case_seed: u64, config: &FuzzConfig) -> (Vec<Failure>, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
    let theta = random_automorphism(&mut rng, &ChainBounds::default());
    let triangular = random_triangular_generators(&mut rng, config.max_generators, config.max_degree);
    let poison = config.inject_non_lnd.then(|| theta.conjugate(&non_lnd(&mut rng)));
    let inst = Instance { theta, triangular, poison };

    let mut failures = Vec::new();
    let mut refused = false;
    match check_recovery(&inst) {
        Verdict::Pass => {}
        Verdict::Refused => refused = true,
        Verdict::Fail(_) => {
            let (small, detail) = shrink(inst);
            failures.push(Failure {
                case,
                case_seed,
                property: "recovery".to_string(),
                detail,
                counterexample: Some(small.counterexample()),
            });
        }
    }
    for (property, detail) in identity_failures(&mut rng, config.max_degree) {
        failures.push(Failure {
            case,
            case_seed,
            property,
            detail,
            counterexample: None,
        });
    }
    (failures, refused)
}

pub fn run_fuzz(config: &FuzzConfig) -> FuzzReport {
    let mut master = ChaCha8Rng::seed_from_u64(config.seed);
    let seeds: Vec<u64> = (0..config.cases).map(|_| master.gen()).collect();
    let results: Vec<(Vec<Failure>, bool)> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, s)| run_case(i, *s, config))
        .collect();
    let failed = results.iter().filter(|(f, _)| !f.is_empty()).count();
    let expected_negative = results.iter().filter(|(f, r)| f.is_empty() && *r).count();
    FuzzReport {
        seed: config.seed,
        cases: config.cases,
        passed: config.cases - failed,
        failed,
        expected_negative,
        failures: results.into_iter().flat_map(|(f, _)| f).collect(),
    }
}
