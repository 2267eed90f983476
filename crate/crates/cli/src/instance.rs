//! Instance files.
//!
//! ```json
//! {
//!   "shape": {"eta": 2, "kappa": 1, "p": 2},
//!   "lambda0": 1.3,
//!   "branches": [{"l1": 1, "l2": 1.4142135623730951}, {"l1": 1, "l2": 1.7320508075688772}],
//!   "measures": [{"atoms": [2], "masses": [1]}, ...],
//!   "profile": {"r": [1, 1.5], "theta": [1.2, 1.2]},
//!   "options": {"tol": 1e-9, "depth": 6, "grid_points": 100000}
//! }
//! ```
//!
//! Only `shape`, `lambda0` and `branches` are required. For trees with a
//! longer trunk, `trunk` lists `lambda_{-1}, ..., lambda_{-kappa+1}`; for more
//! than two generations, each branch carries `tail: [lambda_{i,3}, ...]`.
//! One-generation instances omit `l2`.

use serde::Deserialize;

use scp_core::{AtomicMeasure, Branch, InitialData, RateProfile, TreeData};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shape {
    pub eta: usize,
    pub kappa: usize,
    pub p: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub l1: f64,
    #[serde(default)]
    pub l2: Option<f64>,
    #[serde(default)]
    pub tail: Vec<f64>,
}

impl BranchSpec {
    fn weights(&self) -> Vec<f64> {
        let mut w = vec![self.l1];
        w.extend(self.l2);
        w.extend(&self.tail);
        w
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub tol: Option<f64>,
    pub depth: Option<usize>,
    pub grid_points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub shape: Shape,
    pub lambda0: f64,
    #[serde(default)]
    pub trunk: Vec<f64>,
    pub branches: Vec<BranchSpec>,
    #[serde(default)]
    pub measures: Option<Vec<AtomicMeasure>>,
    #[serde(default)]
    pub profile: Option<RateProfile>,
    #[serde(default)]
    pub options: Options,
}

impl Instance {
    /// Parses and validates an instance. Errors name the offending field and,
    /// for syntax and type errors, the line and column.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        reject_infinite_eta(text)?;
        let de = &mut serde_json::Deserializer::from_str(text);
        let inst: Instance = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let at = if inner.line() > 0 {
                format!("line {}, column {}: ", inner.line(), inner.column())
            } else {
                String::new()
            };
            if path.is_empty() || path == "." {
                CliError::Schema(format!("{at}{inner}"))
            } else {
                CliError::Schema(format!("{at}{path}: {inner}"))
            }
        })?;
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |field: String, why: &str| Err(CliError::Schema(format!("{field}: {why}")));
        if self.shape.eta < 2 {
            return bad("shape.eta".into(), "need at least 2 branches");
        }
        if self.shape.kappa < 1 || self.shape.p < 1 {
            return bad("shape".into(), "kappa and p must be at least 1");
        }
        if self.branches.len() != self.shape.eta {
            return bad(
                "branches".into(),
                &format!(
                    "{} entries, shape.eta = {}",
                    self.branches.len(),
                    self.shape.eta
                ),
            );
        }
        if self.trunk.len() + 1 != self.shape.kappa {
            return bad(
                "trunk".into(),
                &format!(
                    "{} extra trunk weights, shape.kappa = {} needs {}",
                    self.trunk.len(),
                    self.shape.kappa,
                    self.shape.kappa - 1
                ),
            );
        }
        check_weight("lambda0".into(), self.lambda0)?;
        for (j, w) in self.trunk.iter().enumerate() {
            check_weight(format!("trunk[{j}]"), *w)?;
        }
        for (i, b) in self.branches.iter().enumerate() {
            if b.l2.is_none() && !b.tail.is_empty() {
                return bad(format!("branches[{i}].tail"), "given without l2");
            }
            let w = b.weights();
            if w.len() != self.shape.p {
                return bad(
                    format!("branches[{i}]"),
                    &format!("{} weights, shape.p = {}", w.len(), self.shape.p),
                );
            }
            check_weight(format!("branches[{i}].l1"), b.l1)?;
            if let Some(l2) = b.l2 {
                check_weight(format!("branches[{i}].l2"), l2)?;
            }
            for (j, t) in b.tail.iter().enumerate() {
                check_weight(format!("branches[{i}].tail[{j}]"), *t)?;
            }
        }
        if let Some(m) = &self.measures {
            if m.len() != self.shape.eta {
                return bad(
                    "measures".into(),
                    &format!("{} entries, shape.eta = {}", m.len(), self.shape.eta),
                );
            }
        }
        if let Some(t) = self.options.tol {
            if !(t.is_finite() && t >= 0.0) {
                return bad("options.tol".into(), "must be a nonnegative number");
            }
        }
        if self.options.grid_points.is_some_and(|g| g < 100) {
            return bad("options.grid_points".into(), "must be at least 100");
        }
        Ok(())
    }

    /// Data for the two-generation solver; requires `kappa = 1`, `p = 2`.
    pub fn initial_data(&self) -> Result<InitialData, CliError> {
        if self.shape.kappa != 1 || self.shape.p != 2 {
            return Err(CliError::Schema(format!(
                "shape: this command needs kappa = 1 and p = 2, got kappa = {}, p = {}",
                self.shape.kappa, self.shape.p
            )));
        }
        let branches = self
            .branches
            .iter()
            .map(|b| Branch {
                l1: b.l1,
                l2: b.l2.expect("validated p = 2"),
            })
            .collect();
        InitialData::new(self.lambda0, branches).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn tree_data(&self) -> Result<TreeData, CliError> {
        let mut trunk = vec![self.lambda0];
        trunk.extend(&self.trunk);
        TreeData::new(
            trunk,
            self.branches.iter().map(BranchSpec::weights).collect(),
        )
        .map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn first_generation(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.l1).collect()
    }
}

fn check_weight(field: String, w: f64) -> Result<(), CliError> {
    if w.is_finite() && w > 0.0 {
        Ok(())
    } else {
        Err(CliError::Schema(format!(
            "{field}: weight {w} must be positive and finite"
        )))
    }
}

/// Infinitely many branches are out of scope; say so instead of reporting a
/// type error on `shape.eta`.
fn reject_infinite_eta(text: &str) -> Result<(), CliError> {
    let Ok(v) = serde_json::from_str::<serde_json::Value>(text) else {
        return Ok(());
    };
    let eta = &v["shape"]["eta"];
    let infinite = match eta {
        serde_json::Value::String(s) => {
            matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞")
        }
        _ => false,
    };
    if infinite {
        return Err(CliError::Schema(
            "shape.eta: infinitely many branches are not supported; eta must be a finite \
             integer >= 2"
                .into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "shape": {"eta": 2, "kappa": 1, "p": 2},
        "lambda0": 1.3,
        "branches": [{"l1": 1, "l2": 1.4142135623730951}, {"l1": 1, "l2": 1.7320508075688772}]
    }"#;

    #[test]
    fn parses_minimal() {
        let inst = Instance::parse(EXAMPLE).unwrap();
        assert_eq!(inst.shape.eta, 2);
        let d = inst.initial_data().unwrap();
        assert_eq!(d.eta(), 2);
        assert_eq!(inst.tree_data().unwrap().shape().p, 2);
    }

    #[test]
    fn negative_weight_names_field() {
        let text = EXAMPLE.replace("\"l1\": 1, \"l2\": 1.73", "\"l1\": -1, \"l2\": 1.73");
        let err = Instance::parse(&text).unwrap_err();
        assert!(err.to_string().contains("branches[1].l1"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn type_error_has_line_and_path() {
        let text = EXAMPLE.replace("\"lambda0\": 1.3", "\"lambda0\": \"big\"");
        let err = Instance::parse(&text).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("lambda0"), "{err}");
    }

    #[test]
    fn unknown_field_rejected() {
        let text = EXAMPLE.replace("\"lambda0\"", "\"colour\": 1, \"lambda0\"");
        assert!(Instance::parse(&text).is_err());
    }

    #[test]
    fn shape_mismatches() {
        let text = EXAMPLE.replace("\"eta\": 2", "\"eta\": 3");
        assert!(Instance::parse(&text)
            .unwrap_err()
            .to_string()
            .contains("branches"));
        let text = EXAMPLE.replace("\"p\": 2", "\"p\": 3");
        assert!(Instance::parse(&text).is_err());
        let text = EXAMPLE.replace("\"kappa\": 1", "\"kappa\": 2");
        assert!(Instance::parse(&text)
            .unwrap_err()
            .to_string()
            .contains("trunk"));
    }

    #[test]
    fn infinite_eta() {
        let text = EXAMPLE.replace("\"eta\": 2", "\"eta\": \"inf\"");
        let err = Instance::parse(&text).unwrap_err().to_string();
        assert!(err.contains("infinitely many branches"), "{err}");
    }

    #[test]
    fn general_shape() {
        let text = r#"{
            "shape": {"eta": 2, "kappa": 2, "p": 3},
            "lambda0": 1, "trunk": [0.5],
            "branches": [{"l1": 1, "l2": 2, "tail": [2]}, {"l1": 1, "l2": 2, "tail": [2]}]
        }"#;
        let inst = Instance::parse(text).unwrap();
        let t = inst.tree_data().unwrap();
        assert_eq!(t.trunk(), &[1.0, 0.5]);
        assert_eq!(t.branches()[0], vec![1.0, 2.0, 2.0]);
        assert!(inst.initial_data().is_err());
    }

    #[test]
    fn one_generation() {
        let text = r#"{"shape": {"eta": 2, "kappa": 1, "p": 1}, "lambda0": 1,
                       "branches": [{"l1": 1}, {"l1": 1}]}"#;
        let inst = Instance::parse(text).unwrap();
        assert_eq!(inst.first_generation(), vec![1.0, 1.0]);
    }
}
