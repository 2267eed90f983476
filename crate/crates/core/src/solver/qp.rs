//! Diagonal quadratic programs with one equality constraint.

use serde::Serialize;

use crate::error::{Error, Result};

/// Unconstrained-sign minimum of `sum b_i r_i^2` subject to
/// `sum a_i r_i = 1` over positive rates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedMinimum {
    pub value: f64,
    pub r: Vec<f64>,
    /// `sum_j a_j^2/b_j < a_i/b_i` for every `i`, which puts every minimising
    /// rate above 1.
    pub rates_above_one: bool,
}

/// Closed-form minimum `1 / sum(a_i^2 / b_i)` of `sum b_i r_i^2` on
/// `{r > 0, sum a_i r_i = 1}`, attained at `r_i = a_i / (b_i sum_j a_j^2/b_j)`
/// (Cauchy-Schwarz equality case).
pub fn hyperplane_min(a: &[f64], b: &[f64]) -> Result<WeightedMinimum> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            found: a.len(),
        });
    }
    if a.iter().chain(b).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidData("coefficients must be positive".into()));
    }
    let q: f64 = a.iter().zip(b).map(|(a, b)| a * a / b).sum();
    let r = a.iter().zip(b).map(|(a, b)| a / (b * q)).collect();
    let rates_above_one = a.iter().zip(b).all(|(a, b)| q < a / b);
    Ok(WeightedMinimum {
        value: 1.0 / q,
        r,
        rates_above_one,
    })
}

/// Minimiser of `sum c_i r_i^2` over `{r_i >= 1, sum a_i r_i = 1}`.
///
/// KKT gives `r_i = max(1, t a_i / c_i)` for a single multiplier `t`. Start
/// with every rate free, solve for `t`, clamp the rates that fall below 1 and
/// repeat; each pass only lowers `t`, so clamped rates stay clamped and the
/// loop ends after at most `eta` passes. Returns `None` when `sum a_i > 1`.
pub fn min_with_unit_floor(a: &[f64], c: &[f64]) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), c.len());
    let total: f64 = a.iter().sum();
    if total > 1.0 {
        return None;
    }
    let n = a.len();
    let slope: Vec<f64> = a.iter().zip(c).map(|(a, c)| a / c).collect();
    let mut clamped = vec![false; n];

    loop {
        let fixed: f64 = (0..n).filter(|&i| clamped[i]).map(|i| a[i]).sum();
        let spread: f64 = (0..n)
            .filter(|&i| !clamped[i])
            .map(|i| a[i] * slope[i])
            .sum();
        if spread == 0.0 {
            // every rate is clamped: only possible when sum a_i == 1
            return Some(vec![1.0; n]);
        }
        let t = (1.0 - fixed) / spread;
        let mut changed = false;
        for i in 0..n {
            if !clamped[i] && t * slope[i] < 1.0 {
                clamped[i] = true;
                changed = true;
            }
        }
        if !changed {
            return Some(
                (0..n)
                    .map(|i| if clamped[i] { 1.0 } else { t * slope[i] })
                    .collect(),
            );
        }
    }
}
