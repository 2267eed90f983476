//! The feasibility functional
//! `beta(eta) = inf { sum r_i^2 c_i : r in (1, inf)^eta, sum r_i a_i = 1 }`
//! with `a_i = lambda_{i,1}^2 / lambda_{i,2}^2`, `c_i = lambda_{i,1}^2 / lambda_{i,2}^4`.
//!
//! The infimum over the open box equals the minimum over its closure whenever
//! the open set is nonempty, so both routes below minimise over `[1, inf)^eta`
//! and report `attained` for minimisers strictly inside.

use crate::error::{Error, Result};
use crate::tol;

use super::data::{BetaResult, BetaValue, InitialData, RateProfile, Regime};
use super::qp::min_with_unit_floor;

/// `(sigma, tau)` for two branches, with `a_j = lambda_{1,j}^2` and
/// `b_j = lambda_{2,j}^2`:
/// `sigma = a2 / (a1 + b1)`, `tau = a2 (b2 - b1) / (a1 b2)`.
pub fn sigma_tau(data: &InitialData) -> Result<(f64, f64)> {
    let [a1, a2, b1, b2] = eta2_coefficients(data)?;
    Ok((a2 / (a1 + b1), a2 * (b2 - b1) / (a1 * b2)))
}

fn eta2_coefficients(data: &InitialData) -> Result<[f64; 4]> {
    if data.eta() != 2 {
        return Err(Error::ShapeMismatch(format!(
            "closed form needs eta = 2, got {}",
            data.eta()
        )));
    }
    let [first, second] = [data.branches()[0], data.branches()[1]];
    Ok([
        first.l1 * first.l1,
        first.l2 * first.l2,
        second.l1 * second.l1,
        second.l2 * second.l2,
    ])
}

/// Piecewise closed form of `beta(2)`.
///
/// Eliminating `r_2` leaves `Omega(x) = A x^2 - 2 B x + C` on `1 < x < tau`
/// with vertex at `x = sigma`; the three regimes are `Omega(1)`,
/// `Omega(sigma) = 1 / (a1 + b1)` and `Omega(tau)`.
pub fn beta_eta2_closed(data: &InitialData) -> Result<BetaResult> {
    let [a1, a2, b1, b2] = eta2_coefficients(data)?;
    let sigma = a2 / (a1 + b1);
    let tau = a2 * (b2 - b1) / (a1 * b2);

    if tau <= 1.0 {
        return Ok(BetaResult {
            value: BetaValue::NegInfinity,
            attained: false,
            regime: None,
            sigma: Some(sigma),
            tau: Some(tau),
            minimizer: None,
        });
    }

    // r_2 on the constraint line as a function of r_1
    let second = |x: f64| b2 / b1 * (1.0 - a1 / a2 * x);
    // the value is continuous across regime boundaries, so labels snap to the
    // boundary pieces within a relative EQ
    let (value, regime, r) = if sigma <= 1.0 + tol::EQ {
        (
            ((a1 - a2).powi(2) + a1 * b1) / (a2 * a2 * b1),
            Regime::SigmaLow,
            vec![1.0, second(1.0)],
        )
    } else if sigma < tau * (1.0 - tol::EQ) {
        (
            1.0 / (a1 + b1),
            Regime::Interior,
            vec![sigma, second(sigma)],
        )
    } else {
        (
            ((b2 - b1).powi(2) + a1 * b1) / (a1 * b2 * b2),
            Regime::TauHigh,
            vec![tau, 1.0],
        )
    };

    Ok(BetaResult {
        value: BetaValue::Finite(value),
        attained: regime == Regime::Interior,
        regime: Some(regime),
        sigma: Some(sigma),
        tau: Some(tau),
        minimizer: Some(RateProfile::new(r)),
    })
}

/// `beta(eta)` for any finite `eta >= 2` via the exact active-set solution of
/// the diagonal quadratic program.
///
/// The open feasible set is empty exactly when `sum a_i >= 1`; that case
/// returns `-inf`.
pub fn beta_numeric(data: &InitialData) -> BetaResult {
    let a = data.ratio1_all();
    let c = data.ratio2_all();
    let empty = BetaResult {
        value: BetaValue::NegInfinity,
        attained: false,
        regime: Some(Regime::Numeric),
        sigma: None,
        tau: None,
        minimizer: None,
    };
    if a.iter().sum::<f64>() >= 1.0 {
        return empty;
    }
    let Some(r) = min_with_unit_floor(&a, &c) else {
        return empty;
    };
    let value = r.iter().zip(&c).map(|(r, c)| r * r * c).sum();
    let attained = r.iter().all(|r| r - 1.0 > tol::BOUNDARY);
    BetaResult {
        value: BetaValue::Finite(value),
        attained,
        regime: Some(Regime::Numeric),
        sigma: None,
        tau: None,
        minimizer: Some(RateProfile::new(r)),
    }
}

/// Closed form for two branches, active-set solver otherwise.
pub fn beta(data: &InitialData) -> BetaResult {
    match beta_eta2_closed(data) {
        Ok(b) => b,
        Err(_) => beta_numeric(data),
    }
}
