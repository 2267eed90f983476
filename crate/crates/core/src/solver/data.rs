use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measures::AtomicMeasure;
use crate::stampfli::WeightTriple;
use crate::tol;

/// Branch count `eta`, trunk length `kappa` and data depth `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemShape {
    pub eta: usize,
    pub kappa: usize,
    pub p: usize,
}

impl ProblemShape {
    pub fn new(eta: usize, kappa: usize, p: usize) -> Result<Self> {
        if eta < 2 {
            return Err(Error::ShapeMismatch(format!(
                "eta = {eta}, need at least 2 branches"
            )));
        }
        if kappa < 1 || p < 1 {
            return Err(Error::ShapeMismatch(format!(
                "kappa = {kappa}, p = {p}, both must be at least 1"
            )));
        }
        Ok(Self { eta, kappa, p })
    }

    /// The solver handles one trunk weight and two generations per branch.
    pub fn is_two_generation(&self) -> bool {
        self.kappa == 1 && self.p == 2
    }
}

/// First two weights `(lambda_{i,1}, lambda_{i,2})` of one branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub l1: f64,
    pub l2: f64,
}

/// Initial weights for the two-generation problem: the trunk weight
/// `lambda0` and the first two weights of each of the `eta >= 2` branches.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialData {
    lambda0: f64,
    branches: Vec<Branch>,
}

impl InitialData {
    pub fn new(lambda0: f64, branches: Vec<Branch>) -> Result<Self> {
        if branches.len() < 2 {
            return Err(Error::ShapeMismatch(format!(
                "{} branches, need at least 2",
                branches.len()
            )));
        }
        let ok = |w: f64| w.is_finite() && w > 0.0;
        if !ok(lambda0) {
            return Err(Error::InvalidData(format!(
                "lambda0 = {lambda0} is not positive"
            )));
        }
        for (i, b) in branches.iter().enumerate() {
            if !ok(b.l1) || !ok(b.l2) {
                return Err(Error::InvalidData(format!(
                    "branch {} has non-positive weight ({}, {})",
                    i + 1,
                    b.l1,
                    b.l2
                )));
            }
        }
        Ok(Self { lambda0, branches })
    }

    /// Convenience constructor from `(l1, l2)` pairs.
    pub fn from_pairs(lambda0: f64, pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            lambda0,
            pairs.iter().map(|&(l1, l2)| Branch { l1, l2 }).collect(),
        )
    }

    /// Same as [`from_pairs`](Self::from_pairs) but with squared weights.
    pub fn from_squares(lambda0_sq: f64, pairs_sq: &[(f64, f64)]) -> Result<Self> {
        let pairs: Vec<(f64, f64)> = pairs_sq
            .iter()
            .map(|&(a, b)| (a.sqrt(), b.sqrt()))
            .collect();
        Self::from_pairs(lambda0_sq.sqrt(), &pairs)
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn eta(&self) -> usize {
        self.branches.len()
    }

    pub fn shape(&self) -> ProblemShape {
        ProblemShape {
            eta: self.eta(),
            kappa: 1,
            p: 2,
        }
    }

    pub fn lambda0_sq(&self) -> f64 {
        self.lambda0 * self.lambda0
    }

    /// `1 / lambda0^2`, the bound on the second negative moment sum.
    pub fn threshold(&self) -> f64 {
        1.0 / self.lambda0_sq()
    }

    /// `lambda_{i,1}^2 / lambda_{i,2}^2`, coefficient of `r_i` in the
    /// first-moment constraint.
    pub fn ratio1(&self, i: usize) -> f64 {
        let b = self.branches[i];
        (b.l1 / b.l2).powi(2)
    }

    /// `lambda_{i,1}^2 / lambda_{i,2}^4`, coefficient of `r_i^2` in the
    /// objective.
    pub fn ratio2(&self, i: usize) -> f64 {
        let b = self.branches[i];
        self.ratio1(i) / (b.l2 * b.l2)
    }

    pub fn ratio1_all(&self) -> Vec<f64> {
        (0..self.eta()).map(|i| self.ratio1(i)).collect()
    }

    pub fn ratio2_all(&self) -> Vec<f64> {
        (0..self.eta()).map(|i| self.ratio2(i)).collect()
    }

    /// `S = sum_i lambda_{i,1}^2 / lambda_{i,2}^2`.
    pub fn ratio_sum(&self) -> f64 {
        (0..self.eta()).map(|i| self.ratio1(i)).sum()
    }

    /// `sum_i lambda_{i,1}^2`.
    pub fn first_gen_sum(&self) -> f64 {
        self.branches.iter().map(|b| b.l1 * b.l1).sum()
    }

    /// Every weight multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(
            self.lambda0 * t,
            self.branches
                .iter()
                .map(|b| Branch {
                    l1: b.l1 * t,
                    l2: b.l2 * t,
                })
                .collect(),
        )
    }

    /// Same branches, different trunk weight.
    pub fn with_lambda0(&self, lambda0: f64) -> Result<Self> {
        Self::new(lambda0, self.branches.clone())
    }
}

/// Candidate rates `r_i >= 1` (and optionally `theta_i > 1`) describing a
/// completion branch by branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateProfile {
    pub r: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
}

impl RateProfile {
    pub fn new(r: Vec<f64>) -> Self {
        Self { r, theta: None }
    }

    pub fn ones(eta: usize) -> Self {
        Self::new(vec![1.0; eta])
    }

    /// `sum_i r_i lambda_{i,1}^2 / lambda_{i,2}^2`; a feasible profile gives 1.
    pub fn constraint_value(&self, data: &InitialData) -> f64 {
        self.r
            .iter()
            .enumerate()
            .map(|(i, r)| r * data.ratio1(i))
            .sum()
    }

    /// `sum_i r_i^2 lambda_{i,1}^2 / lambda_{i,2}^4`.
    pub fn objective(&self, data: &InitialData) -> f64 {
        self.r
            .iter()
            .enumerate()
            .map(|(i, r)| r * r * data.ratio2(i))
            .sum()
    }

    /// Branches with `r_i = 1` (up to [`tol::BOUNDARY`]) and those with
    /// `r_i > 1`.
    pub fn partition(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.r.len()).partition(|&i| self.r[i] - 1.0 <= tol::BOUNDARY)
    }

    /// All rates strictly above the boundary.
    pub fn is_interior(&self) -> bool {
        self.r.iter().all(|r| r - 1.0 > tol::BOUNDARY)
    }
}

/// `beta(eta)`, which is `-inf` when no rates in `(1, inf)` satisfy the
/// first-moment constraint. Serialises as a number or the string `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaValue {
    Finite(f64),
    NegInfinity,
}

impl BetaValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            BetaValue::Finite(v) => Some(*v),
            BetaValue::NegInfinity => None,
        }
    }

    pub fn is_neg_infinity(&self) -> bool {
        matches!(self, BetaValue::NegInfinity)
    }
}

impl Serialize for BetaValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BetaValue::Finite(v) => s.serialize_f64(*v),
            BetaValue::NegInfinity => s.serialize_str("-inf"),
        }
    }
}

/// Which piece of the `eta = 2` closed form produced the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `sigma <= 1`: infimum approached as `r_1 -> 1`.
    SigmaLow,
    /// `1 < sigma < tau`: unconstrained minimiser is feasible.
    Interior,
    /// `tau <= sigma`: infimum approached as `r_2 -> 1`.
    TauHigh,
    /// Computed by the active-set solver.
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaResult {
    pub value: BetaValue,
    /// Whether the infimum over the open set `(1, inf)^eta` is a minimum.
    pub attained: bool,
    pub regime: Option<Regime>,
    pub sigma: Option<f64>,
    pub tau: Option<f64>,
    /// Minimiser over the closure `[1, inf)^eta`.
    pub minimizer: Option<RateProfile>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchKind {
    OneAtomic,
    TwoAtomic,
}

/// One branch of a constructed completion: the Stampfli tail
/// `(lambda_{i,2}, lambda^_{i,3}, lambda^_{i,4})` and the branch measure.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchCompletion {
    pub kind: BranchKind,
    pub tail: WeightTriple,
    pub measure: AtomicMeasure,
    pub r: f64,
    pub theta: Option<f64>,
}

impl BranchCompletion {
    pub fn lambda3_hat(&self) -> f64 {
        self.tail.y()
    }

    pub fn lambda4_hat(&self) -> f64 {
        self.tail.z()
    }
}

impl Serialize for BranchCompletion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BranchCompletion", 6)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("lambda3_hat", &self.lambda3_hat())?;
        st.serialize_field("lambda4_hat", &self.lambda4_hat())?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("theta", &self.theta)?;
        st.serialize_field("measure", &self.measure)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletionResult {
    pub branches: Vec<BranchCompletion>,
    /// Common `theta` used for the 2-atomic branches, if it was chosen here.
    pub tau: Option<f64>,
}

impl CompletionResult {
    pub fn measures(&self) -> Vec<AtomicMeasure> {
        self.branches.iter().map(|b| b.measure.clone()).collect()
    }

    /// 0-based indices of the 1-atomic branches.
    pub fn one_atomic(&self) -> Vec<usize> {
        (0..self.branches.len())
            .filter(|&i| self.branches[i].kind == BranchKind::OneAtomic)
            .collect()
    }
}
