use crate::error::{Error, Result};
use crate::measures::AtomicMeasure;
use crate::stampfli::{stampfli_measure, triple_from_params, RateTheta, WeightTriple};
use crate::tol;

use super::data::{BranchCompletion, BranchKind, CompletionResult, InitialData, RateProfile};

/// Common `theta` for the 2-atomic branches: halfway from 1 to the largest
/// admissible value, capped at 2.
pub fn choose_tau(theta_max: f64) -> f64 {
    (0.5 * (1.0 + theta_max)).min(2.0)
}

/// Builds explicit completion weights and branch measures from a feasible
/// rate profile.
///
/// Branches with `r_i = 1` get `delta(lambda_{i,2}^2)` and the flat tail
/// `lambda^_{i,3} = lambda^_{i,4} = lambda_{i,2}`. Branches with `r_i > 1` get
/// the Stampfli tail generated from `(lambda_{i,2}, r_i, theta)`, where
/// `theta` is the profile's own value when it carries one and otherwise the
/// common value from [`choose_tau`] with
/// `theta_max = (1/lambda0^2 - sum_{r=1} c_i) / sum_{r>1} r_i^2 c_i`.
pub fn construct_completion(data: &InitialData, profile: &RateProfile) -> Result<CompletionResult> {
    let eta = data.eta();
    if profile.r.len() != eta {
        return Err(Error::LengthMismatch {
            expected: eta,
            found: profile.r.len(),
        });
    }
    if let Some(theta) = &profile.theta {
        if theta.len() != eta {
            return Err(Error::LengthMismatch {
                expected: eta,
                found: theta.len(),
            });
        }
    }
    if let Some(r) = profile
        .r
        .iter()
        .find(|r| !(r.is_finite() && **r >= 1.0 - tol::BOUNDARY))
    {
        return Err(Error::InfeasibleProfile(format!("rate {r} is below 1")));
    }
    let residual = profile.constraint_value(data) - 1.0;
    if residual.abs() > tol::BOUNDARY {
        return Err(Error::InfeasibleProfile(format!(
            "first-moment constraint off by {residual:e}"
        )));
    }

    let (flat, curved) = profile.partition();
    let threshold = data.threshold();
    let flat_sum: f64 = flat.iter().map(|&i| data.ratio2(i)).sum();

    let tau = if profile.theta.is_some() || curved.is_empty() {
        if curved.is_empty() && flat_sum > threshold * (1.0 + tol::EQ) {
            return Err(Error::InfeasibleProfile(format!(
                "flat profile gives {flat_sum} above the bound {threshold}"
            )));
        }
        None
    } else {
        let curved_sum: f64 = curved
            .iter()
            .map(|&i| profile.r[i].powi(2) * data.ratio2(i))
            .sum();
        let theta_max = (threshold - flat_sum) / curved_sum;
        if theta_max.is_nan() || theta_max - 1.0 <= 2.0 * tol::POLE {
            return Err(Error::NoThetaBudget { theta_max });
        }
        Some(choose_tau(theta_max))
    };

    let mut branches = Vec::with_capacity(eta);
    for (i, b) in data.branches().iter().enumerate() {
        let r = profile.r[i];
        let branch = if r - 1.0 <= tol::BOUNDARY {
            BranchCompletion {
                kind: BranchKind::OneAtomic,
                tail: WeightTriple::flat(b.l2)?,
                measure: AtomicMeasure::dirac(b.l2 * b.l2)?,
                r: 1.0,
                theta: None,
            }
        } else {
            let theta = match (&profile.theta, tau) {
                (Some(t), _) => t[i],
                (None, Some(t)) => t,
                (None, None) => unreachable!("tau is chosen whenever a branch has r > 1"),
            };
            let rt = RateTheta::new(r, theta)
                .map_err(|e| Error::InfeasibleProfile(format!("branch {}: {e}", i + 1)))?;
            let tail = triple_from_params(b.l2, rt)?;
            BranchCompletion {
                kind: BranchKind::TwoAtomic,
                measure: stampfli_measure(&tail)?,
                tail,
                r,
                theta: Some(theta),
            }
        };
        branches.push(branch);
    }
    Ok(CompletionResult { branches, tau })
}
