//! Numerical tolerances shared across the crate.

/// Relative tolerance on the total mass of a measure.
pub const NORM: f64 = 1e-12;

/// Atoms closer than this (relative) are merged into one.
pub const ATOM_MERGE: f64 = 1e-12;

/// Relative tolerance for equality constraints such as `sum r_i a_i = 1` and
/// for the equal-weight tests of flat data.
pub const EQ: f64 = 1e-10;

/// A rate `r` with `r - 1 <= BOUNDARY` is treated as sitting on the boundary
/// `r = 1`.
pub const BOUNDARY: f64 = 1e-9;

/// Inputs closer than this to the poles `r = 1`, `theta = 1` of the Stampfli
/// formulas are rejected.
pub const POLE: f64 = 1e-10;

/// Default absolute tolerance on verification residuals.
pub const VERIFY: f64 = 1e-9;
