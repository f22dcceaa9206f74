//! Locally nilpotent derivations of the polynomial ring `K[x, y]` over the
//! rationals.
//!
//! The crate decides local nilpotency with explicit certificates
//! (`D = f'(a) D_a` with `a` a coordinate), computes polynomial
//! automorphisms of the plane as elementary chains, closes finite sets of
//! derivations into Lie algebras, and conjugates any Lie algebra of locally
//! nilpotent derivations into the triangular algebra
//! `u2 = { α ∂x + β(x) ∂y }`.

pub mod automorphism;
pub mod derivation;
pub mod expr;
pub mod lie;
pub mod linalg;
pub mod polyring;
pub mod random;
pub mod triangular;

pub use automorphism::{ElementaryMap, PolyAut};
pub use derivation::Derivation;
pub use polyring::{rat, Monomial, Poly, Rat, UniPoly, Var};
