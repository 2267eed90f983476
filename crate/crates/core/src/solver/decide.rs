//! Existence decisions for the two-generation problem.

use serde::Serialize;

use crate::tol;

use super::beta::beta;
use super::data::{BetaResult, InitialData, RateProfile};
use super::qp::min_with_unit_floor;

/// Whether a completion with every branch measure 2-atomic exists:
/// `-inf < beta(eta) < 1 / lambda0^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoAtomicDecision {
    pub exists: bool,
    pub beta: BetaResult,
    pub threshold: f64,
    /// `beta` is within [`tol::EQ`] (relative) of the threshold, where the
    /// strict inequality decides the answer.
    pub boundary: bool,
    /// Rates strictly inside `(1, inf)^eta` whose objective is below the
    /// threshold.
    pub witness: Option<RateProfile>,
}

pub fn exists_two_atomic(data: &InitialData) -> TwoAtomicDecision {
    let beta = beta(data);
    let threshold = data.threshold();
    // S within rounding of 1 leaves no room above r_i = 1
    let degenerate = 1.0 - data.ratio_sum() <= tol::EQ;
    let value = match beta.value.finite() {
        Some(v) if !degenerate => v,
        _ => {
            return TwoAtomicDecision {
                exists: false,
                beta,
                threshold,
                boundary: degenerate,
                witness: None,
            }
        }
    };
    let exists = value < threshold;
    let boundary = (value - threshold).abs() <= tol::EQ * threshold;
    let witness = if exists {
        beta.minimizer
            .as_ref()
            .and_then(|m| interior_witness(data, m, value, threshold))
    } else {
        None
    };
    TwoAtomicDecision {
        exists,
        beta,
        threshold,
        boundary,
        witness,
    }
}

/// Moves a closure minimiser into the open box while keeping the objective
/// below the threshold.
///
/// The uniform profile `r_i = 1 / S` is feasible and strictly interior when
/// `S < 1`; convex combinations with the minimiser stay feasible, and the
/// objective tends to `beta` as the weight on the minimiser tends to 1.
fn interior_witness(
    data: &InitialData,
    minimizer: &RateProfile,
    value: f64,
    threshold: f64,
) -> Option<RateProfile> {
    if minimizer.is_interior() {
        return Some(minimizer.clone());
    }
    let centre = 1.0 / data.ratio_sum();
    let target = value + 0.5 * (threshold - value);
    let mut weight = 0.5;
    for _ in 0..200 {
        let r: Vec<f64> = minimizer
            .r
            .iter()
            .map(|m| (1.0 - weight) * m + weight * centre)
            .collect();
        let candidate = RateProfile::new(r);
        if candidate.is_interior() && candidate.objective(data) <= target {
            return Some(candidate);
        }
        weight *= 0.5;
    }
    None
}

/// Outcome of the general existence test, with 1-atomic branches allowed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletionDecision {
    pub exists: bool,
    /// `S = sum_i lambda_{i,1}^2 / lambda_{i,2}^2`.
    pub ratio_sum: f64,
    /// Objective of the best profile over `{r >= 1, sum r_i a_i = 1}`.
    pub value: Option<f64>,
    pub threshold: f64,
    pub boundary: bool,
    pub witness: Option<RateProfile>,
    /// 0-based branches whose witness rate is 1 (1-atomic measure).
    pub one_atomic: Vec<usize>,
    pub reason: &'static str,
}

/// Existence of any subnormal completion: some `r in [1, inf)^eta` with
/// `sum r_i a_i = 1` and `sum r_i^2 c_i` at most the threshold when every
/// `r_i = 1`, strictly below it otherwise.
pub fn exists_completion(data: &InitialData) -> CompletionDecision {
    let s = data.ratio_sum();
    let threshold = data.threshold();
    let eta = data.eta();

    if s > 1.0 + tol::EQ {
        return CompletionDecision {
            exists: false,
            ratio_sum: s,
            value: None,
            threshold,
            boundary: false,
            witness: None,
            one_atomic: vec![],
            reason: "no rates r_i >= 1 satisfy the first-moment constraint",
        };
    }

    if (s - 1.0).abs() <= tol::EQ {
        // only r = 1 is feasible: every branch is 1-atomic
        let profile = RateProfile::ones(eta);
        let value = profile.objective(data);
        let exists = value <= threshold * (1.0 + tol::EQ);
        return CompletionDecision {
            exists,
            ratio_sum: s,
            value: Some(value),
            threshold,
            boundary: (value - threshold).abs() <= tol::EQ * threshold,
            witness: exists.then_some(profile),
            one_atomic: if exists { (0..eta).collect() } else { vec![] },
            reason: if exists {
                "flat completion with 1-atomic branch measures"
            } else {
                "flat profile exceeds the second-moment bound"
            },
        };
    }

    let a = data.ratio1_all();
    let c = data.ratio2_all();
    let r = min_with_unit_floor(&a, &c).unwrap_or_else(|| vec![1.0; eta]);
    let profile = RateProfile::new(r);
    let value = profile.objective(data);
    let exists = value < threshold;
    let one_atomic = if exists {
        profile.partition().0
    } else {
        vec![]
    };
    CompletionDecision {
        exists,
        ratio_sum: s,
        value: Some(value),
        threshold,
        boundary: (value - threshold).abs() <= tol::EQ * threshold,
        witness: exists.then_some(profile),
        one_atomic,
        reason: if exists {
            "minimising profile is strictly below the second-moment bound"
        } else {
            "every feasible profile reaches the second-moment bound"
        },
    }
}
