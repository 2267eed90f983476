use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("negative moment of order {order} diverges: the measure has an atom at zero")]
    ZeroAtomNegativeMoment { order: i32 },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid weight triple ({x}, {y}, {z}): {reason}")]
    InvalidTriple {
        x: f64,
        y: f64,
        z: f64,
        reason: &'static str,
    },

    #[error("{what} = {value} is outside {domain}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid initial data: {0}")]
    InvalidData(String),

    #[error("infeasible rate profile: {0}")]
    InfeasibleProfile(String),

    #[error("no second-moment budget for 2-atomic branches: theta_max = {theta_max} <= 1")]
    NoThetaBudget { theta_max: f64 },

    #[error("second-generation weights differ across branches")]
    NotFlat,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
