//! Two-generation subnormal completion on the directed tree with one trunk
//! vertex and `eta` infinite branches.
//!
//! Given the trunk weight `lambda0` and the first two weights of every branch,
//! the crate decides whether the weights extend to a subnormal weighted shift
//! on the whole tree, builds explicit completions whose branch measures are
//! 1- or 2-atomic, and certifies every answer with the moment conditions that
//! characterise such completions.
//!
//! Layout:
//!
//! - [`measures`]: finite atomic probability measures and their power moments.
//! - [`stampfli`]: the canonical subnormal extension of three increasing
//!   weights, its 2-atomic Berger measure and the `(r, theta)` parametrisation.
//! - [`solver`]: the feasibility functional `beta`, decision procedures and
//!   completion construction.
//! - [`verifier`]: independent moment-condition checks and brute-force oracles.

pub mod error;
pub mod measures;
pub mod solver;
pub mod stampfli;
pub mod tol;
pub mod verifier;

pub use error::{Error, Result};
pub use measures::AtomicMeasure;
pub use solver::{
    BetaResult, BetaValue, Branch, BranchCompletion, BranchKind, CompletionResult, InitialData,
    ProblemShape, RateProfile, Regime,
};
pub use stampfli::{NormalizedPair, RateTheta, StampfliParams, TripleKind, WeightTriple};
pub use verifier::{ConditionKind, ConditionResult, ConditionStatus, TreeData, VerificationReport};
