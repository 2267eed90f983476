//! Command implementations. Each returns a serialisable report that knows its
//! exit code and a short human-readable summary.

use std::fmt::Write as _;

use serde::Serialize;

use scp_core::solver::{
    beta, classify_flat, construct_completion, exists_completion, exists_two_atomic,
    necessary_checks, one_generation_check, sufficient_checks, CompletionDecision, FlatClass,
    NecessaryReport, OneGenerationResult, SufficientReport, TwoAtomicDecision,
};
use scp_core::stampfli::{
    neg_moment1, neg_moment2, params_from_triple, stampfli_measure, stampfli_params,
    support_sup_closed, triple_from_params, weight_sequence,
};
use scp_core::verifier::{brute_force_beta, verify_completion, verify_measures};
use scp_core::{
    tol, AtomicMeasure, BetaResult, BetaValue, CompletionResult, Error, RateProfile, RateTheta,
    TripleKind, VerificationReport, WeightTriple,
};

use crate::error::{CliError, EXIT_NO, EXIT_NUMERICAL, EXIT_OK};
use crate::instance::Instance;

pub const DEFAULT_DEPTH: usize = 6;

pub trait Outcome: Serialize {
    fn exit_code(&self) -> i32;
    fn summary(&self) -> String;
}

/// Verification tolerance: command-line flag, then instance option, then the
/// default.
pub fn resolve_tol(flag: Option<f64>, inst: Option<&Instance>) -> f64 {
    flag.or_else(|| inst.and_then(|i| i.options.tol))
        .unwrap_or(tol::VERIFY)
}

fn numerical(e: Error) -> CliError {
    CliError::Numerical(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Decision {
    #[serde(rename = "YES")]
    Yes,
    #[serde(rename = "NO")]
    No,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub decision: Decision,
    pub reason: String,
    /// Whether a completion with every branch measure 2-atomic exists.
    pub two_atomic: bool,
    pub boundary: bool,
    pub beta: BetaValue,
    pub regime: Option<scp_core::Regime>,
    pub threshold: f64,
    pub flat_class: Option<FlatClass>,
    pub necessary: NecessaryReport,
    pub sufficient: SufficientReport,
    pub two_atomic_decision: TwoAtomicDecision,
    pub completion_decision: CompletionDecision,
    pub witness: Option<RateProfile>,
    pub completion: Option<CompletionResult>,
    pub verification: Option<VerificationReport>,
}

fn flat_reason(class: FlatClass) -> &'static str {
    match class {
        FlatClass::NoCompletionHyponormality => "hyponormality violated",
        FlatClass::NoTwoAtomicOneAtomicOnly => {
            "flat data with lambda_{i,2}^2 = sum lambda_{j,1}^2: only the 1-atomic completion"
        }
        FlatClass::TwoAtomicExists => "flat data admitting 2-atomic branch measures",
        FlatClass::NoTwoAtomicMustBeOneAtomic => {
            "flat data with lambda0^2 = sum lambda_{j,1}^2: no 2-atomic completion"
        }
    }
}

/// Full decision: necessary and sufficient checks, both existence tests, and
/// on YES an explicit completion certified by [`verify_completion`].
///
/// The completion is built from the instance's `profile` when present,
/// otherwise from the witness of the general existence test.
pub fn solve(inst: &Instance, tol: f64) -> Result<SolveReport, CliError> {
    let data = inst.initial_data()?;
    let depth = inst.options.depth.unwrap_or(DEFAULT_DEPTH);
    let two = exists_two_atomic(&data);
    let general = exists_completion(&data);
    let flat_class = classify_flat(&data).ok();

    let mut reason = general.reason.to_string();
    if let Some(class) = flat_class {
        if !general.exists || class == FlatClass::NoCompletionHyponormality {
            reason = flat_reason(class).to_string();
        }
    }

    let witness = match (&inst.profile, &two.witness, &general.witness) {
        (Some(p), _, _) if general.exists => Some(p.clone()),
        (_, Some(w), _) if two.exists => Some(w.clone()),
        (_, _, Some(w)) => Some(w.clone()),
        _ => None,
    };
    let (completion, verification) = match &witness {
        Some(w) => {
            let c = construct_completion(&data, w).map_err(|e| match e {
                Error::InfeasibleProfile(_) | Error::LengthMismatch { .. }
                    if inst.profile.is_some() =>
                {
                    CliError::Schema(format!("profile: {e}"))
                }
                e => numerical(e),
            })?;
            let v = verify_completion(&data, &c, depth, tol).map_err(numerical)?;
            (Some(c), Some(v))
        }
        None => (None, None),
    };

    Ok(SolveReport {
        decision: if general.exists {
            Decision::Yes
        } else {
            Decision::No
        },
        reason,
        two_atomic: two.exists,
        boundary: two.boundary || general.boundary,
        beta: two.beta.value,
        regime: two.beta.regime,
        threshold: data.threshold(),
        flat_class,
        necessary: necessary_checks(&data),
        sufficient: sufficient_checks(&data),
        two_atomic_decision: two,
        completion_decision: general,
        witness,
        completion,
        verification,
    })
}

impl Outcome for SolveReport {
    fn exit_code(&self) -> i32 {
        match (self.decision, &self.verification) {
            (Decision::Yes, Some(v)) if !v.passed => EXIT_NUMERICAL,
            (Decision::Yes, _) => EXIT_OK,
            (Decision::No, _) => EXIT_NO,
        }
    }

    fn summary(&self) -> String {
        let mut s = String::new();
        let answer = match self.decision {
            Decision::Yes => "YES",
            Decision::No => "NO",
        };
        let _ = writeln!(s, "decision: {answer} ({})", self.reason);
        let _ = writeln!(
            s,
            "2-atomic completion: {}{}",
            if self.two_atomic { "yes" } else { "no" },
            if self.boundary { " [boundary]" } else { "" }
        );
        let beta = match self.beta {
            BetaValue::Finite(v) => format!("{v}"),
            BetaValue::NegInfinity => "-inf".into(),
        };
        let regime = self.regime.map(|r| format!(" ({r:?})")).unwrap_or_default();
        let _ = writeln!(s, "beta = {beta}{regime}, 1/lambda0^2 = {}", self.threshold);
        if let Some(c) = self.flat_class {
            let _ = writeln!(s, "flat class: {c:?}");
        }
        let held = self
            .necessary
            .inequalities
            .iter()
            .filter(|i| i.holds)
            .count();
        let _ = writeln!(
            s,
            "necessary inequalities: {held}/{} hold",
            self.necessary.inequalities.len()
        );
        let names: Vec<_> = self.sufficient.satisfied().map(|c| c.name).collect();
        if !names.is_empty() {
            let _ = writeln!(s, "sufficient conditions: {}", names.join(", "));
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(s, "witness r = {:?}", w.r);
        }
        if let Some(c) = &self.completion {
            if let Some(t) = c.tau {
                let _ = writeln!(s, "theta = {t}");
            }
            for (i, b) in c.branches.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "branch {}: {:?}, lambda3 = {}, lambda4 = {}, atoms {:?}",
                    i + 1,
                    b.kind,
                    b.lambda3_hat(),
                    b.lambda4_hat(),
                    b.measure.atoms()
                );
            }
        }
        if let Some(v) = &self.verification {
            let _ = writeln!(s, "{}", verification_line(v));
        }
        s
    }
}

fn verification_line(v: &VerificationReport) -> String {
    let worst = v
        .conditions
        .iter()
        .map(|c| c.violation())
        .filter(|r| r.is_finite())
        .fold(0.0, f64::max);
    format!(
        "verification: {} ({} conditions, max violation {worst:e})",
        if v.passed { "PASS" } else { "FAIL" },
        v.conditions.len()
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaReport {
    #[serde(flatten)]
    pub beta: BetaResult,
    pub threshold: f64,
    /// Grid-search value when `options.grid_points` is set and `eta <= 3`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_minimum: Option<Option<f64>>,
}

pub fn beta_cmd(inst: &Instance) -> Result<BetaReport, CliError> {
    let data = inst.initial_data()?;
    let grid_minimum = match inst.options.grid_points {
        Some(n) if data.eta() <= 3 => Some(brute_force_beta(&data, n).map_err(numerical)?),
        _ => None,
    };
    Ok(BetaReport {
        beta: beta(&data),
        threshold: data.threshold(),
        grid_minimum,
    })
}

impl Outcome for BetaReport {
    fn exit_code(&self) -> i32 {
        EXIT_OK
    }

    fn summary(&self) -> String {
        let value = match self.beta.value {
            BetaValue::Finite(v) => format!("{v}"),
            BetaValue::NegInfinity => "-inf".into(),
        };
        let mut s = format!("beta = {value}");
        if let Some(r) = self.beta.regime {
            let _ = write!(s, " ({r:?})");
        }
        let _ = writeln!(s, ", attained: {}", self.beta.attained);
        if let (Some(sig), Some(tau)) = (self.beta.sigma, self.beta.tau) {
            let _ = writeln!(s, "sigma = {sig}, tau = {tau}");
        }
        if let Some(m) = &self.beta.minimizer {
            let _ = writeln!(s, "minimiser r = {:?}", m.r);
        }
        if let Some(g) = self.grid_minimum {
            let _ = writeln!(s, "grid minimum = {g:?}");
        }
        let _ = writeln!(s, "1/lambda0^2 = {}", self.threshold);
        s
    }
}

pub fn verify(inst: &Instance, tol: f64) -> Result<VerificationReport, CliError> {
    let measures = inst
        .measures
        .as_ref()
        .ok_or_else(|| CliError::Schema("measures: required by verify".into()))?;
    verify_measures(&inst.tree_data()?, measures, tol).map_err(|e| CliError::Schema(e.to_string()))
}

impl Outcome for VerificationReport {
    fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_NO
        }
    }

    fn summary(&self) -> String {
        let mut s = verification_line(self);
        s.push('\n');
        for c in &self.conditions {
            let mut place = String::new();
            if let Some(b) = c.branch {
                let _ = write!(place, " branch {}", b + 1);
            }
            if let Some(o) = c.order {
                let _ = write!(place, " order {o}");
            }
            let _ = writeln!(
                s,
                "  {:<20}{place}: {:?}, residual {:e} (tol {:e})",
                c.name, c.status, c.residual, c.tolerance
            );
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatReport {
    pub class: FlatClass,
    pub description: &'static str,
}

pub fn classify(inst: &Instance) -> Result<FlatReport, CliError> {
    let data = inst.initial_data()?;
    let class = classify_flat(&data).map_err(|e| CliError::Schema(format!("branches: {e}")))?;
    Ok(FlatReport {
        class,
        description: flat_reason(class),
    })
}

impl Outcome for FlatReport {
    fn exit_code(&self) -> i32 {
        EXIT_OK
    }

    fn summary(&self) -> String {
        format!("{:?}: {}\n", self.class, self.description)
    }
}

pub fn one_gen(inst: &Instance) -> Result<OneGenerationResult, CliError> {
    if inst.shape.kappa != 1 {
        return Err(CliError::Schema("shape: one-gen needs kappa = 1".into()));
    }
    Ok(one_generation_check(inst.lambda0, &inst.first_generation()))
}

impl Outcome for OneGenerationResult {
    fn exit_code(&self) -> i32 {
        if self.holds {
            EXIT_OK
        } else {
            EXIT_NO
        }
    }

    fn summary(&self) -> String {
        match &self.witness_l2 {
            Some(w) => {
                format!("extends with 2-atomic branch measures; e.g. lambda_{{i,2}} = {w:?}\n")
            }
            None => "no extension: lambda0^2 >= sum lambda_{i,1}^2\n".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StampfliInput {
    Triple { x: f64, y: f64, z: f64 },
    Params { x: f64, r: f64, theta: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct StampfliReport {
    pub triple: WeightTriple,
    pub kind: TripleKind,
    pub measure: AtomicMeasure,
    pub params: Option<RateTheta>,
    pub psi0: Option<f64>,
    pub psi1: Option<f64>,
    pub neg_moment1: Option<f64>,
    pub neg_moment2: Option<f64>,
    pub sup_support: f64,
    /// Closed-form largest atom; present for `(x, r, theta)` input.
    pub sup_support_closed: Option<f64>,
    pub weights: Vec<f64>,
}

pub fn stampfli(input: StampfliInput, n: usize) -> Result<StampfliReport, CliError> {
    let bad = |e: Error| CliError::Usage(e.to_string());
    let (triple, closed) = match input {
        StampfliInput::Triple { x, y, z } => (WeightTriple::new(x, y, z).map_err(bad)?, None),
        StampfliInput::Params { x, r, theta } => {
            let rt = RateTheta::new(r, theta).map_err(bad)?;
            let t = triple_from_params(x, rt).map_err(bad)?;
            (t, Some(support_sup_closed(x, rt).map_err(numerical)?))
        }
    };
    let measure = stampfli_measure(&triple).map_err(numerical)?;
    let generic = triple.kind() == TripleKind::Generic;
    let psi = generic
        .then(|| stampfli_params(&triple))
        .transpose()
        .map_err(numerical)?;
    Ok(StampfliReport {
        triple,
        kind: triple.kind(),
        params: generic
            .then(|| params_from_triple(&triple))
            .transpose()
            .map_err(numerical)?,
        psi0: psi.map(|p| p.psi0),
        psi1: psi.map(|p| p.psi1),
        neg_moment1: generic
            .then(|| neg_moment1(&triple))
            .transpose()
            .map_err(numerical)?,
        neg_moment2: generic
            .then(|| neg_moment2(&triple))
            .transpose()
            .map_err(numerical)?,
        sup_support: measure.support_sup(),
        sup_support_closed: closed,
        weights: weight_sequence(&triple, n.max(3)).map_err(numerical)?,
        measure,
    })
}

impl Outcome for StampfliReport {
    fn exit_code(&self) -> i32 {
        EXIT_OK
    }

    fn summary(&self) -> String {
        let mut s = String::new();
        let [x, y, z] = self.triple.weights();
        let _ = writeln!(s, "triple ({x}, {y}, {z}), {:?}", self.kind);
        let _ = writeln!(
            s,
            "measure: atoms {:?}, masses {:?}",
            self.measure.atoms(),
            self.measure.masses()
        );
        if let Some(p) = self.params {
            let _ = writeln!(s, "r = {}, theta = {}", p.r(), p.theta());
        }
        let _ = writeln!(s, "sup supp = {}", self.sup_support);
        let _ = writeln!(s, "weights: {:?}", self.weights);
        s
    }
}
