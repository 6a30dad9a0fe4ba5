use thiserror::Error;

/// Errors raised by the checks, solvers and integrators of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: String,
        expected: usize,
        got: usize,
    },

    #[error("sample set is empty")]
    EmptySamples,

    #[error("matrix is not symmetric: defect {defect:e} exceeds {tolerance:e}")]
    NotSymmetric { defect: f64, tolerance: f64 },

    #[error("matrix is not positive definite: {context}")]
    NotPositiveDefinite { context: String },

    #[error("singular matrix: {context}")]
    Singular { context: String },

    #[error("state {state:?} lies outside the admissible box")]
    OutsideBox { state: Vec<f64> },

    #[error("inadmissible state {state:?}: {reason}")]
    Inadmissible { state: Vec<f64>, reason: String },

    #[error("state outside box at cell {cell} (x = {position:?}): {reason}")]
    StateOutsideBox {
        cell: usize,
        position: Vec<f64>,
        reason: String,
    },

    #[error("Newton iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },

    #[error("non-finite value in component {component} of cell {cell} at t = {t}")]
    NonFinite {
        cell: usize,
        component: usize,
        t: f64,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("left and right states coincide; there is no jump")]
    NoJump,

    #[error("characteristic speed {index} is not simple (gap {gap:e} to a neighbour)")]
    EigenvalueCollision { index: usize, gap: f64 },

    #[error("flux is not convex on [{lower}, {upper}]: f'' = {second_derivative:e} at u = {at}")]
    NotConvex {
        lower: f64,
        upper: f64,
        at: f64,
        second_derivative: f64,
    },

    #[error("stability bound violated: {detail}")]
    Unstable { detail: String },

    #[error("viscosity unresolved: h = {h} exceeds eps/4 = {limit}")]
    UnresolvedViscosity { h: f64, limit: f64 },

    #[error("construction defect: {detail}")]
    Construction { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension {
            what: what.to_string(),
            expected,
            got,
        })
    }
}
