//! Closed-form sufficient conditions with explicit witnesses, and the
//! necessary inequalities every completion with 2-atomic branch measures
//! satisfies.

use serde::Serialize;

use crate::tol;

use super::data::{InitialData, RateProfile};

/// One sufficient condition: hypothesis, witness rates and the checks the
/// witness passes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SufficientCondition {
    pub name: &'static str,
    pub holds: bool,
    pub witness: Option<RateProfile>,
    /// `sum r_i a_i - 1` for the witness.
    pub constraint_residual: Option<f64>,
    /// `sum r_i^2 c_i` for the witness.
    pub value: Option<f64>,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SufficientReport {
    pub conditions: Vec<SufficientCondition>,
}

impl SufficientReport {
    pub fn any(&self) -> bool {
        self.conditions.iter().any(|c| c.holds)
    }

    pub fn satisfied(&self) -> impl Iterator<Item = &SufficientCondition> {
        self.conditions.iter().filter(|c| c.holds)
    }
}

pub const SECOND_GEN_DOMINATES: &str = "second_generation_dominates";
pub const UNIFORM_RATE: &str = "uniform_rate";
pub const EQUAL_SHARE: &str = "equal_share";
pub const INVERSE_SECOND_GEN: &str = "inverse_second_generation";

/// Evaluates the four sufficient conditions for a completion with every
/// branch measure 2-atomic. A condition holds when its hypothesis holds and
/// its witness is strictly interior, feasible and strictly below the bound.
pub fn sufficient_checks(data: &InitialData) -> SufficientReport {
    let eta = data.eta();
    let n = eta as f64;
    let l0 = data.lambda0_sq();
    let l1: Vec<f64> = data.branches().iter().map(|b| b.l1 * b.l1).collect();
    let l2: Vec<f64> = data.branches().iter().map(|b| b.l2 * b.l2).collect();
    let first_sum: f64 = l1.iter().sum();
    let s = data.ratio_sum();
    let c_sum: f64 = data.ratio2_all().iter().sum();
    let inv_l2_sum: f64 = l2.iter().map(|v| 1.0 / v).sum();

    let candidates: [(&'static str, bool, Vec<f64>); 4] = [
        (
            SECOND_GEN_DOMINATES,
            l2.iter().all(|v| first_sum < *v) && l0 < first_sum,
            l2.iter().map(|v| v / first_sum).collect(),
        ),
        (
            UNIFORM_RATE,
            s < 1.0 && l0 * c_sum < s * s,
            vec![1.0 / s; eta],
        ),
        (
            EQUAL_SHARE,
            l1.iter().zip(&l2).all(|(a, b)| n * a < *b)
                && l0 * l1.iter().map(|v| 1.0 / v).sum::<f64>() < n * n,
            l1.iter().zip(&l2).map(|(a, b)| b / (n * a)).collect(),
        ),
        (
            INVERSE_SECOND_GEN,
            l1.iter().all(|a| a * inv_l2_sum < 1.0)
                && l0
                    * l1.iter()
                        .zip(&l2)
                        .map(|(a, b)| 1.0 / (a * b * b))
                        .sum::<f64>()
                    < inv_l2_sum * inv_l2_sum,
            l1.iter().map(|a| 1.0 / (a * inv_l2_sum)).collect(),
        ),
    ];

    let threshold = data.threshold();
    let conditions = candidates
        .into_iter()
        .map(|(name, hypothesis, r)| {
            if !hypothesis {
                return SufficientCondition {
                    name,
                    holds: false,
                    witness: None,
                    constraint_residual: None,
                    value: None,
                    threshold,
                };
            }
            let witness = RateProfile::new(r);
            let residual = witness.constraint_value(data) - 1.0;
            let value = witness.objective(data);
            let holds = witness.is_interior() && residual.abs() <= tol::EQ && value < threshold;
            SufficientCondition {
                name,
                holds,
                witness: Some(witness),
                constraint_residual: Some(residual),
                value: Some(value),
                threshold,
            }
        })
        .collect();
    SufficientReport { conditions }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrictInequality {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NecessaryReport {
    pub inequalities: Vec<StrictInequality>,
    /// A failure rules out completions with every branch measure 2-atomic.
    pub all_hold: bool,
}

/// `lambda0^2 < sum lambda_{i,1}^2`, `sum c_i < 1/lambda0^2`, `sum a_i < 1`
/// and `sum lambda_{i,1}^2 < max lambda_{i,2}^2`.
pub fn necessary_checks(data: &InitialData) -> NecessaryReport {
    let first_sum = data.first_gen_sum();
    let c_sum: f64 = data.ratio2_all().iter().sum();
    let max_l2 = data
        .branches()
        .iter()
        .map(|b| b.l2 * b.l2)
        .fold(f64::NEG_INFINITY, f64::max);
    let ineq = |name, lhs: f64, rhs: f64| StrictInequality {
        name,
        lhs,
        rhs,
        holds: lhs < rhs,
    };
    let inequalities = vec![
        ineq("trunk_below_first_generation", data.lambda0_sq(), first_sum),
        ineq("second_moment_budget", c_sum, data.threshold()),
        ineq("ratio_sum_below_one", data.ratio_sum(), 1.0),
        ineq("first_generation_below_max_second", first_sum, max_l2),
    ];
    let all_hold = inequalities.iter().all(|i| i.holds);
    NecessaryReport {
        inequalities,
        all_hold,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneGenerationResult {
    pub holds: bool,
    /// Second-generation weights `lambda_{i,2} = sqrt(2 sum lambda_{j,1}^2)`,
    /// which satisfy `sum_j lambda_{j,1}^2 < lambda_{i,2}^2` for every `i`.
    pub witness_l2: Option<Vec<f64>>,
}

/// One-generation data `(lambda0, lambda_{i,1})` extends with 2-atomic branch
/// measures iff `lambda0^2 < sum lambda_{i,1}^2`.
pub fn one_generation_check(lambda0: f64, l1: &[f64]) -> OneGenerationResult {
    let first_sum: f64 = l1.iter().map(|v| v * v).sum();
    let holds = lambda0 * lambda0 < first_sum;
    OneGenerationResult {
        holds,
        witness_l2: holds.then(|| vec![(2.0 * first_sum).sqrt(); l1.len()]),
    }
}
