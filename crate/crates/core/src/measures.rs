//! Finite atomic probability measures on `[0, inf)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// A probability measure `sum_k mass_k * delta(atom_k)` with finitely many
/// atoms on the nonnegative half-line.
///
/// Atoms are sorted ascending and pairwise distinct, masses are strictly
/// positive and sum to one. Values are immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct AtomicMeasure {
    atoms: Vec<f64>,
    masses: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasure {
    atoms: Vec<f64>,
    masses: Vec<f64>,
}

impl TryFrom<RawMeasure> for AtomicMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        AtomicMeasure::new(raw.atoms, raw.masses)
    }
}

impl From<AtomicMeasure> for RawMeasure {
    fn from(m: AtomicMeasure) -> Self {
        RawMeasure {
            atoms: m.atoms,
            masses: m.masses,
        }
    }
}

impl AtomicMeasure {
    /// Builds a measure from parallel atom/mass lists.
    ///
    /// Atoms within relative distance [`tol::ATOM_MERGE`] are merged (masses
    /// added, position mass-weighted) and the masses are renormalised after
    /// merging.
    pub fn new(atoms: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if atoms.len() != masses.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms but {} masses",
                atoms.len(),
                masses.len()
            )));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if let Some(a) = atoms.iter().find(|a| !a.is_finite() || **a < 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "atom {a} is not a finite nonnegative number"
            )));
        }
        if let Some(m) = masses.iter().find(|m| !m.is_finite() || **m <= 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "mass {m} is not a finite positive number"
            )));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > tol::NORM * atoms.len() as f64 {
            return Err(Error::InvalidMeasure(format!(
                "masses sum to {total}, not 1"
            )));
        }

        let mut pairs: Vec<(f64, f64)> = atoms.into_iter().zip(masses).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (s, m) in pairs {
            match merged.last_mut() {
                Some((ls, lm)) if (s - *ls).abs() <= tol::ATOM_MERGE * s.abs().max(ls.abs()) => {
                    let w = *lm + m;
                    *ls = (*ls * *lm + s * m) / w;
                    *lm = w;
                }
                _ => merged.push((s, m)),
            }
        }

        let total: f64 = merged.iter().map(|p| p.1).sum();
        let (atoms, masses) = merged.into_iter().map(|(s, m)| (s, m / total)).unzip();
        Ok(Self { atoms, masses })
    }

    /// The point mass at `s`.
    pub fn dirac(s: f64) -> Result<Self> {
        Self::new(vec![s], vec![1.0])
    }

    /// `rho * delta(s0) + (1 - rho) * delta(s1)`.
    pub fn two_point(s0: f64, s1: f64, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidMeasure(format!(
                "two-point mass {rho} is not in (0, 1)"
            )));
        }
        Self::new(vec![s0, s1], vec![rho, 1.0 - rho])
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Number of atoms, i.e. the cardinality of the support.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `sum_k mass_k * atom_k^n`; negative orders require every atom to be
    /// positive.
    pub fn moment(&self, n: i32) -> Result<f64> {
        if n < 0 && self.has_atom_at_zero() {
            return Err(Error::ZeroAtomNegativeMoment { order: n });
        }
        Ok(self
            .atoms
            .iter()
            .zip(&self.masses)
            .map(|(s, m)| m * s.powi(n))
            .sum())
    }

    /// Largest point of the support.
    pub fn support_sup(&self) -> f64 {
        self.atoms[self.atoms.len() - 1]
    }

    /// Exact comparison: atoms come from closed-form constructions, not
    /// measurements.
    pub fn has_atom_at_zero(&self) -> bool {
        self.atoms[0] == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    fn example_measure() -> AtomicMeasure {
        AtomicMeasure::new(vec![3.0 - SQRT3, 3.0 + SQRT3], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn dirac_moments() {
        let d = AtomicMeasure::dirac(2.0).unwrap();
        assert_eq!(d.moment(1).unwrap(), 2.0);
        assert_eq!(d.moment(0).unwrap(), 1.0);
        assert_eq!(d.moment(-2).unwrap(), 0.25);
        assert_eq!(d.support_sup(), 2.0);
        assert!(!d.has_atom_at_zero());
    }

    #[test]
    fn negative_moments_of_equal_mass_pair() {
        let m = example_measure();
        assert!((m.moment(-1).unwrap() - 0.5).abs() < 1e-15);
        // (1/2)((3 - sqrt3)^-2 + (3 + sqrt3)^-2) = (1/2) * 24 / 36
        let oracle = 0.5 * ((3.0 - SQRT3).powi(-2) + (3.0 + SQRT3).powi(-2));
        assert!((m.moment(-2).unwrap() - oracle).abs() < 1e-15);
        assert!((m.moment(-2).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.support_sup(), 3.0 + SQRT3);
    }

    #[test]
    fn stampfli_atoms_of_unit_triple() {
        let s = std::f64::consts::SQRT_2;
        let m = AtomicMeasure::new(vec![2.0 + s, 2.0 - s], vec![0.4, 0.6]).unwrap();
        assert_eq!(m.atoms(), &[2.0 - s, 2.0 + s]);
        assert_eq!(m.masses(), &[0.6, 0.4]);
        assert_eq!(m.support_sup(), 2.0 + s);
        assert!(!m.has_atom_at_zero());
    }

    #[test]
    fn zero_atom() {
        let d = AtomicMeasure::dirac(0.0).unwrap();
        assert!(d.has_atom_at_zero());
        assert_eq!(d.moment(2).unwrap(), 0.0);
        assert_eq!(
            d.moment(-1),
            Err(Error::ZeroAtomNegativeMoment { order: -1 })
        );
    }

    #[test]
    fn merges_coincident_atoms() {
        let m = AtomicMeasure::new(vec![1.0, 1.0 + 1e-14, 3.0], vec![0.25, 0.25, 0.5]).unwrap();
        assert_eq!(m.len(), 2);
        assert!((m.masses()[0] - 0.5).abs() < 1e-15);
        assert!((m.moment(1).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(AtomicMeasure::new(vec![], vec![]).is_err());
        assert!(AtomicMeasure::new(vec![1.0], vec![0.5]).is_err());
        assert!(AtomicMeasure::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(AtomicMeasure::new(vec![-1.0], vec![1.0]).is_err());
        assert!(AtomicMeasure::new(vec![1.0, 2.0], vec![1.5, -0.5]).is_err());
        assert!(AtomicMeasure::new(vec![f64::NAN], vec![1.0]).is_err());
        assert!(AtomicMeasure::two_point(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn json_shape() {
        let m = AtomicMeasure::two_point(1.0, 4.0, 0.25).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"atoms":[1.0,4.0],"masses":[0.25,0.75]}"#);
        let back: AtomicMeasure = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
        assert!(
            serde_json::from_str::<AtomicMeasure>(r#"{"atoms":[1.0],"masses":[0.2]}"#).is_err()
        );
    }
}
