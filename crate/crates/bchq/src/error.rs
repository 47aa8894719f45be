use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// `Domain` carries the violated inequality as structured data so callers can
/// print lines like `‖x‖+‖y‖ = 0.31 >= 1/(4*C_b) = 0.125` instead of a bare
/// "out of range".
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {degree} outside supported range 1..={max}")]
    DegreeRange { degree: usize, max: usize },

    #[error("truncation degrees differ: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a Lie element (certificate: {certificate} = {value})")]
    NotLieElement {
        /// Which test failed: "primitivity defect" or "projection residual".
        certificate: &'static str,
        /// l1 mass of the failing certificate, exact, rendered as `p/q`.
        value: String,
    },

    #[error("domain violated: {inequality} (got {lhs}, bound {rhs})")]
    Domain {
        /// The inequality that must hold, e.g. `"|x|+|y| < 1/(4*C_b)"`.
        inequality: String,
        lhs: f64,
        rhs: f64,
    },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("iteration limit {limit} exceeded (last residual {last_residual:.3e})")]
    IterationLimit { limit: usize, last_residual: f64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
