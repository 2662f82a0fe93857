//! asalg: exact-arithmetic tools for finite-dimensional associative
//! algebras given by structure constants.
//!
//! The crate ships a catalog of the indecomposable complex associative
//! algebras of dimensions 2–4 together with a verification harness that
//! recomputes every tabulated invariant, checks the printed automorphism
//! families, and separates the entries pairwise by basis-change-invariant
//! fingerprints.  All arithmetic is exact over the Gaussian rationals, so a
//! passing check is a proof at the sampled points rather than a numerical
//! observation.
//!
//! Module map:
//! * [`exactnum`] — scalars in ℚ(i), dense matrices, RREF subspaces
//! * [`algebra`] — the structure-constant algebra type and its calculus
//! * [`invariants`] — annihilators, center, radical, fingerprints
//! * [`morphisms`] — homomorphism checks and automorphism-family templates
//! * [`catalog`] — the built-in classification data and the verifier

pub mod algebra;
pub mod catalog;
pub mod exactnum;
pub mod invariants;
pub mod morphisms;

pub use algebra::{Algebra, AlgebraError};
pub use exactnum::{ExactNumError, Matrix, Scalar, Subspace};
