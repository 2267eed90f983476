use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol;

use super::data::InitialData;

/// Classification of data whose second-generation weights coincide across
/// branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FlatClass {
    /// No subnormal completion: the collapsed weights
    /// `(lambda0, sqrt(sum lambda_{i,1}^2), lambda_{1,2})` are not
    /// nondecreasing.
    NoCompletionHyponormality,
    /// `lambda_{1,2}^2 = sum lambda_{i,1}^2`: no 2-atomic completion; only
    /// the flat 1-atomic one can exist.
    NoTwoAtomicOneAtomicOnly,
    /// `lambda_{1,2}^2 > sum lambda_{i,1}^2 > lambda0^2`.
    TwoAtomicExists,
    /// `lambda_{1,2}^2 > sum lambda_{i,1}^2 = lambda0^2`: any completion
    /// must be 1-atomic.
    NoTwoAtomicMustBeOneAtomic,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= tol::EQ * a.abs().max(b.abs())
}

pub fn classify_flat(data: &InitialData) -> Result<FlatClass> {
    let second = data.branches()[0].l2.powi(2);
    if !data.branches().iter().all(|b| close(b.l2 * b.l2, second)) {
        return Err(Error::NotFlat);
    }
    let first_sum = data.first_gen_sum();
    let l0 = data.lambda0_sq();

    if second < first_sum && !close(second, first_sum) {
        return Ok(FlatClass::NoCompletionHyponormality);
    }
    if l0 > first_sum && !close(l0, first_sum) {
        return Ok(FlatClass::NoCompletionHyponormality);
    }
    if close(second, first_sum) {
        return Ok(FlatClass::NoTwoAtomicOneAtomicOnly);
    }
    if close(l0, first_sum) {
        Ok(FlatClass::NoTwoAtomicMustBeOneAtomic)
    } else {
        Ok(FlatClass::TwoAtomicExists)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(l0_sq: f64, l2_sq: f64) -> InitialData {
        InitialData::from_squares(l0_sq, &[(1.0, l2_sq), (1.0, l2_sq)]).unwrap()
    }

    #[test]
    fn four_cases() {
        assert_eq!(
            classify_flat(&flat(1.0, 1.5)).unwrap(),
            FlatClass::NoCompletionHyponormality
        );
        assert_eq!(
            classify_flat(&flat(1.0, 2.0)).unwrap(),
            FlatClass::NoTwoAtomicOneAtomicOnly
        );
        assert_eq!(
            classify_flat(&flat(1.0, 3.0)).unwrap(),
            FlatClass::TwoAtomicExists
        );
        assert_eq!(
            classify_flat(&flat(2.0, 3.0)).unwrap(),
            FlatClass::NoTwoAtomicMustBeOneAtomic
        );
        assert_eq!(
            classify_flat(&flat(2.5, 3.0)).unwrap(),
            FlatClass::NoCompletionHyponormality
        );
    }

    #[test]
    fn not_flat() {
        let d = InitialData::from_squares(1.0, &[(1.0, 2.0), (1.0, 3.0)]).unwrap();
        assert_eq!(classify_flat(&d), Err(Error::NotFlat));
    }
}
