//! Certification of proposed branch measures and completions by the moment
//! conditions characterising subnormal completions on `T_{eta,kappa}`, plus a
//! grid-search oracle for `beta`.
//!
//! Measures are finitely atomic, so every integral below is an exact finite
//! sum. Equalities report a relative residual and pass when it is within
//! `tol` in absolute value; the trunk inequality reports a normalised slack
//! that passes when it is at least `-tol`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::AtomicMeasure;
use crate::solver::{BranchKind, CompletionResult, InitialData, ProblemShape};
use crate::stampfli::{weight_sequence, TripleKind};

/// Initial weights on `T_{eta,kappa,p}`: the trunk
/// `(lambda_0, lambda_{-1}, ..., lambda_{-kappa+1})` and, for every branch,
/// `(lambda_{i,1}, ..., lambda_{i,p})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeData {
    trunk: Vec<f64>,
    branches: Vec<Vec<f64>>,
}

impl TreeData {
    pub fn new(trunk: Vec<f64>, branches: Vec<Vec<f64>>) -> Result<Self> {
        let p = branches.first().map_or(0, Vec::len);
        ProblemShape::new(branches.len(), trunk.len(), p)?;
        if let Some(b) = branches.iter().find(|b| b.len() != p) {
            return Err(Error::ShapeMismatch(format!(
                "branch with {} weights, expected {p}",
                b.len()
            )));
        }
        let bad = trunk
            .iter()
            .chain(branches.iter().flatten())
            .find(|w| !(w.is_finite() && **w > 0.0));
        if let Some(w) = bad {
            return Err(Error::InvalidData(format!(
                "weight {w} is not positive and finite"
            )));
        }
        Ok(Self { trunk, branches })
    }

    pub fn trunk(&self) -> &[f64] {
        &self.trunk
    }

    pub fn branches(&self) -> &[Vec<f64>] {
        &self.branches
    }

    pub fn shape(&self) -> ProblemShape {
        ProblemShape {
            eta: self.branches.len(),
            kappa: self.trunk.len(),
            p: self.branches[0].len(),
        }
    }

    /// `floor((kappa + p + 2) / 2)`, the number of atoms per branch measure
    /// that always suffices.
    pub fn atom_bound(&self) -> usize {
        let s = self.shape();
        (s.kappa + s.p + 2) / 2
    }
}

impl From<&InitialData> for TreeData {
    fn from(d: &InitialData) -> Self {
        Self {
            trunk: vec![d.lambda0()],
            branches: d.branches().iter().map(|b| vec![b.l1, b.l2]).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionStatus {
    Pass,
    /// An inequality with slack in `[-tol, 0)`.
    BoundaryPass,
    Fail,
}

/// How a condition's residual reads: a signed error, a slack that must stay
/// above `-tolerance`, or the size of a pass/fail violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionKind {
    Equality,
    Inequality,
    Flag,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub name: &'static str,
    /// 0-based branch index for per-branch conditions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<usize>,
    /// Moment order or depth index the condition refers to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<i32>,
    pub kind: ConditionKind,
    pub status: ConditionStatus,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl ConditionResult {
    fn equality(name: &'static str, residual: f64, tol: f64) -> Self {
        let pass = residual.abs() <= tol;
        Self::with_status(ConditionKind::Equality, name, residual, tol, pass, false)
    }

    fn inequality(name: &'static str, slack: f64, tol: f64) -> Self {
        let pass = slack >= -tol;
        Self::with_status(
            ConditionKind::Inequality,
            name,
            slack,
            tol,
            pass,
            pass && slack < 0.0,
        )
    }

    /// Pass/fail condition; `residual` is the size of the violation, 0 when
    /// it holds.
    fn flag(name: &'static str, ok: bool, residual: f64) -> Self {
        Self::with_status(ConditionKind::Flag, name, residual, 0.0, ok, false)
    }

    fn with_status(
        kind: ConditionKind,
        name: &'static str,
        residual: f64,
        tol: f64,
        pass: bool,
        boundary: bool,
    ) -> Self {
        let status = match (pass, boundary) {
            (false, _) => ConditionStatus::Fail,
            (true, true) => ConditionStatus::BoundaryPass,
            (true, false) => ConditionStatus::Pass,
        };
        Self {
            name,
            branch: None,
            order: None,
            kind,
            status,
            pass,
            residual,
            tolerance: tol,
        }
    }

    /// Distance from satisfying the condition exactly: `|residual|` for
    /// equalities, the negative part of the slack for inequalities.
    pub fn violation(&self) -> f64 {
        match self.kind {
            ConditionKind::Inequality => (-self.residual).max(0.0),
            _ => self.residual.abs(),
        }
    }

    fn at(mut self, branch: Option<usize>, order: Option<i32>) -> Self {
        self.branch = branch;
        self.order = order;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    /// `max_i sup supp mu_i`.
    pub sup_support: f64,
    pub conditions: Vec<ConditionResult>,
}

impl VerificationReport {
    fn from_conditions(conditions: Vec<ConditionResult>, sup_support: f64) -> Self {
        Self {
            passed: conditions.iter().all(|c| c.pass),
            sup_support,
            conditions,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionResult> {
        self.conditions.iter().filter(|c| !c.pass)
    }

    pub fn find(&self, name: &str) -> impl Iterator<Item = &ConditionResult> + '_ {
        let name = name.to_owned();
        self.conditions.iter().filter(move |c| c.name == name)
    }
}

pub const FIRST_MOMENT_MATCH: &str = "first_moment_match";
pub const NEG_MOMENT_SUM: &str = "neg_moment_sum";
pub const TRUNK_EQUALITY: &str = "trunk_equality";
pub const TRUNK_INEQUALITY: &str = "trunk_inequality";
pub const SUP_SUPPORT: &str = "sup_support";
pub const ATOM_COUNT_BOUND: &str = "atom_count_bound";
pub const ZERO_ATOM: &str = "zero_atom";
pub const TAIL_START: &str = "tail_start";
pub const BRANCH_KIND: &str = "branch_kind";
pub const WEIGHT_MONOTONICITY: &str = "weight_monotonicity";
pub const WEIGHT_BOUND: &str = "weight_bound";
pub const WEIGHT_MOMENT_MATCH: &str = "weight_moment_match";

fn relative(value: f64, target: f64) -> f64 {
    (value - target) / target
}

/// `sum_i lambda_{i,1}^2 int s^-k dmu_i`, or `+inf` if some measure charges
/// zero.
fn weighted_neg_moment(data: &TreeData, measures: &[AtomicMeasure], k: i32) -> f64 {
    data.branches
        .iter()
        .zip(measures)
        .map(|(b, m)| m.moment(-k).map_or(f64::INFINITY, |v| b[0] * b[0] * v))
        .sum()
}

/// Checks the measures `mu_i` against:
///
/// - `int s^n dmu_i = prod_{j=2}^{n+1} lambda_{i,j}^2` for `n = 1..p-1`;
/// - `sum_i lambda_{i,1}^2 int s^-1 dmu_i = 1`;
/// - `prod_{j<k} lambda_{-j}^2 sum_i lambda_{i,1}^2 int s^-(k+1) dmu_i = 1`
///   for `k = 1..kappa-1`;
/// - `prod_{j<kappa} lambda_{-j}^2 sum_i lambda_{i,1}^2 int s^-(kappa+1) dmu_i <= 1`;
/// - finite supremum of the supports.
pub fn verify_measures(
    data: &TreeData,
    measures: &[AtomicMeasure],
    tol: f64,
) -> Result<VerificationReport> {
    let shape = data.shape();
    if measures.len() != shape.eta {
        return Err(Error::ShapeMismatch(format!(
            "{} measures for {} branches",
            measures.len(),
            shape.eta
        )));
    }
    let mut out = Vec::new();

    for (i, (b, m)) in data.branches.iter().zip(measures).enumerate() {
        let mut product = 1.0;
        for (n, w) in b.iter().enumerate().take(shape.p).skip(1) {
            product *= w * w;
            let moment = m.moment(n as i32).expect("positive orders always exist");
            out.push(
                ConditionResult::equality(FIRST_MOMENT_MATCH, relative(moment, product), tol)
                    .at(Some(i), Some(n as i32)),
            );
        }
    }

    let sum1 = weighted_neg_moment(data, measures, 1);
    out.push(ConditionResult::equality(NEG_MOMENT_SUM, sum1 - 1.0, tol).at(None, Some(-1)));

    let mut trunk_product = 1.0;
    for k in 1..shape.kappa {
        trunk_product *= data.trunk[k - 1] * data.trunk[k - 1];
        let s = weighted_neg_moment(data, measures, k as i32 + 1);
        out.push(
            ConditionResult::equality(TRUNK_EQUALITY, trunk_product * s - 1.0, tol)
                .at(None, Some(-(k as i32) - 1)),
        );
    }
    let last = data.trunk[shape.kappa - 1];
    trunk_product *= last * last;
    let s = weighted_neg_moment(data, measures, shape.kappa as i32 + 1);
    out.push(
        ConditionResult::inequality(TRUNK_INEQUALITY, 1.0 - trunk_product * s, tol)
            .at(None, Some(-(shape.kappa as i32) - 1)),
    );

    let sup = measures
        .iter()
        .map(AtomicMeasure::support_sup)
        .fold(0.0, f64::max);
    let unbounded = if sup.is_finite() { 0.0 } else { f64::INFINITY };
    out.push(ConditionResult::flag(
        SUP_SUPPORT,
        sup.is_finite(),
        unbounded,
    ));

    Ok(VerificationReport::from_conditions(out, sup))
}

/// [`verify_measures`] plus structural checks on a constructed completion:
/// at most 2 atoms per branch, no atom at zero, the branch kind matches its
/// tail and measure, and the tail weights `w_0 = lambda_{i,2}, w_1, ...` up to
/// `depth` are nondecreasing, bounded by `sqrt(sup supp mu_i)` and reproduce
/// the moments `int s^n dmu_i = w_0^2 ... w_{n-1}^2`.
///
/// The weights beyond the tail triple are regenerated from the triple itself,
/// so the moment match ties the stored measure to the stored weights.
pub fn verify_completion(
    data: &InitialData,
    result: &CompletionResult,
    depth: usize,
    tol: f64,
) -> Result<VerificationReport> {
    if !data.shape().is_two_generation() {
        return Err(Error::ShapeMismatch(
            "completions need kappa = 1, p = 2".into(),
        ));
    }
    if result.branches.len() != data.eta() {
        return Err(Error::ShapeMismatch(format!(
            "{} completed branches for {} branches",
            result.branches.len(),
            data.eta()
        )));
    }
    let tree = TreeData::from(data);
    let report = verify_measures(&tree, &result.measures(), tol)?;
    let mut out = report.conditions;
    let bound = tree.atom_bound();

    for (i, (b, c)) in data.branches().iter().zip(&result.branches).enumerate() {
        let m = &c.measure;
        let here = |r: ConditionResult| r.at(Some(i), None);

        out.push(here(ConditionResult::equality(
            TAIL_START,
            relative(c.tail.x(), b.l2),
            tol,
        )));
        out.push(here(ConditionResult::flag(
            ATOM_COUNT_BOUND,
            m.len() <= bound,
            m.len().saturating_sub(bound) as f64,
        )));
        let zero_mass = if m.has_atom_at_zero() {
            m.masses()[0]
        } else {
            0.0
        };
        out.push(here(ConditionResult::flag(
            ZERO_ATOM,
            zero_mass == 0.0,
            zero_mass,
        )));
        let kind_ok = match c.kind {
            BranchKind::OneAtomic => m.len() == 1 && c.tail.kind() == TripleKind::Flat,
            BranchKind::TwoAtomic => m.len() == 2 && c.tail.kind() == TripleKind::Generic,
        };
        out.push(here(ConditionResult::flag(
            BRANCH_KIND,
            kind_ok,
            if kind_ok { 0.0 } else { 1.0 },
        )));

        let weights = weight_sequence(&c.tail, depth.max(3))?;
        let weights = &weights[..depth.max(1).min(weights.len())];
        let top = m.support_sup().sqrt();

        let drop = weights
            .windows(2)
            .map(|w| (w[0] - w[1]) / w[0])
            .fold(0.0, f64::max);
        out.push(here(ConditionResult::inequality(
            WEIGHT_MONOTONICITY,
            -drop,
            tol,
        )));
        let excess = weights
            .iter()
            .map(|w| (w - top) / top)
            .fold(f64::MIN, f64::max);
        out.push(here(ConditionResult::inequality(
            WEIGHT_BOUND,
            -excess,
            tol,
        )));

        let mut gamma = 1.0;
        for (n, w) in weights.iter().enumerate() {
            gamma *= w * w;
            let moment = m
                .moment(n as i32 + 1)
                .expect("positive orders always exist");
            out.push(
                ConditionResult::equality(WEIGHT_MOMENT_MATCH, relative(moment, gamma), tol)
                    .at(Some(i), Some(n as i32 + 1)),
            );
        }
    }
    Ok(VerificationReport::from_conditions(out, report.sup_support))
}

/// Grid minimum of `sum r_i^2 c_i` over `{r >= 1, sum r_i a_i = 1}` for two
/// or three branches, parametrised by the first `eta - 1` rates. `None` when
/// `sum a_i >= 1`, i.e. no rates above 1 are feasible.
///
/// The grid includes the boundary `r_i = 1`, so for `eta = 2` the value is an
/// upper bound on `beta(2)` that is exact in the boundary regimes.
pub fn brute_force_beta(data: &InitialData, grid_points: usize) -> Result<Option<f64>> {
    let eta = data.eta();
    if !(2..=3).contains(&eta) {
        return Err(Error::ShapeMismatch(format!(
            "grid search handles 2 or 3 branches, got {eta}"
        )));
    }
    if grid_points < 100 {
        return Err(Error::OutOfDomain {
            what: "grid_points",
            value: grid_points as f64,
            domain: "[100, inf)",
        });
    }
    let a = data.ratio1_all();
    let c = data.ratio2_all();
    let slack = 1.0 - a.iter().sum::<f64>();
    if slack <= 0.0 {
        return Ok(None);
    }
    let value = |r: &[f64]| r.iter().zip(&c).map(|(r, c)| r * r * c).sum::<f64>();
    // r_k = 1 + e_k with e_k >= 0 and sum e_k a_k = slack
    let step = |n: usize, i: usize| i as f64 / (n - 1) as f64;

    let best = if eta == 2 {
        (0..grid_points)
            .map(|i| {
                let e0 = slack / a[0] * step(grid_points, i);
                let e1 = (slack - a[0] * e0).max(0.0) / a[1];
                value(&[1.0 + e0, 1.0 + e1])
            })
            .fold(f64::INFINITY, f64::min)
    } else {
        let n = (grid_points as f64).sqrt().ceil() as usize;
        let mut best = f64::INFINITY;
        for i in 0..n {
            let e0 = slack / a[0] * step(n, i);
            let rest = (slack - a[0] * e0).max(0.0);
            for j in 0..n {
                let e1 = rest / a[1] * step(n, j);
                let e2 = (rest - a[1] * e1).max(0.0) / a[2];
                best = best.min(value(&[1.0 + e0, 1.0 + e1, 1.0 + e2]));
            }
        }
        best
    };
    Ok(Some(best))
}
