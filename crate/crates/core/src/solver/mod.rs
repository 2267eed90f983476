//! Decision procedures and explicit completions for two generations of data
//! on a tree with one trunk weight.
//!
//! A completion is described branch by branch through a rate `r_i >= 1`:
//! `r_i = 1` means the branch measure is `delta(lambda_{i,2}^2)`, `r_i > 1`
//! means it is the 2-atomic Stampfli measure with
//! `int s^-1 = r_i / lambda_{i,2}^2`. Feasibility reduces to
//! `sum r_i a_i = 1` together with a bound `1 / lambda0^2` on
//! `sum theta_i r_i^2 c_i`.

mod beta;
mod checks;
mod construct;
mod data;
mod decide;
mod flat;
mod qp;

pub use beta::{beta, beta_eta2_closed, beta_numeric, sigma_tau};
pub use checks::{
    necessary_checks, one_generation_check, sufficient_checks, NecessaryReport,
    OneGenerationResult, StrictInequality, SufficientCondition, SufficientReport, EQUAL_SHARE,
    INVERSE_SECOND_GEN, SECOND_GEN_DOMINATES, UNIFORM_RATE,
};
pub use construct::{choose_tau, construct_completion};
pub use data::{
    BetaResult, BetaValue, Branch, BranchCompletion, BranchKind, CompletionResult, InitialData,
    ProblemShape, RateProfile, Regime,
};
pub use decide::{exists_completion, exists_two_atomic, CompletionDecision, TwoAtomicDecision};
pub use flat::{classify_flat, FlatClass};
pub use qp::{hyperplane_min, min_with_unit_floor, WeightedMinimum};
