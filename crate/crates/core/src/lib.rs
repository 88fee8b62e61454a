//! Exact arithmetic and congruence classification of symmetric bilinear
//! forms over finite local rings of odd characteristic.
//!
//! The crate is organized in four layers:
//!
//! * [`localring`] — arithmetic in three families of finite local rings
//!   (`Z/p^n`, Galois rings `GR(p^n, r)`, truncated polynomial rings
//!   `F_{p^r}[t]/(t^m)`), together with the unit-group structure needed
//!   downstream: square testing, canonical square roots, and the canonical
//!   non-square unit of each ring.
//! * [`matrix`] — dense exact linear algebra over a ring context: products,
//!   division-free determinants, inverses over unit pivots, direct sums and
//!   congruence transforms.
//! * [`reduction`] — the classification pipeline. Any symmetric matrix with
//!   unit determinant is carried by an explicit invertible witness `P` to the
//!   standard form `H_{2ν} ⊕ Δ`, where `H_{2ν}` is a hyperbolic block and
//!   `Δ` is empty, `(1)`, `(z)`, or `diag(1, -z)` for the ring's canonical
//!   non-square unit `z`.
//! * [`oracle`] — brute-force ground truth on tiny rings: exhaustive
//!   enumeration of symmetric invertible matrices and BFS computation of
//!   their congruence orbits, used to validate the classification
//!   independently of the reduction pipeline.

pub mod error;
pub mod localring;
pub mod matrix;
pub mod oracle;
pub mod reduction;

pub use error::{Error, Result};
pub use localring::{Family, RingContext, RingElement};
pub use matrix::{random_symmetric_invertible, Matrix};
pub use reduction::{DeltaKind, ReductionWitness, StandardForm, TypeForm, TypeKind};
pub use oracle::{CheckResult, OrbitReport, OrbitSummary};
