use thiserror::Error;

use crate::models::PoleOrder;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the hydrodynamic model needs a wave vector; use eval_nonlocal")]
    NeedsWaveVector,

    #[error("eps(i zeta) has a {0} pole at zeta = 0")]
    PoleAtZero(PoleOrder),

    #[error("no material contrast: eps = 1 gives a vanishing force")]
    VacuumDegeneracy,

    #[error("{what} did not converge ({detail})")]
    NonConvergence { what: String, detail: String },

    #[error("series diverges: {0}")]
    Divergence(String),

    #[error("model has no dissipation on the real axis: {0}")]
    NoDissipation(String),

    #[error("sum rule inapplicable: {0}")]
    SumRuleInapplicable(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    #[error("contour passes through a zero or pole of the dispersion function near {re}{im:+}i")]
    PoleOnContour { re: f64, im: f64 },

    #[error("wave vector must be nonzero")]
    ZeroWaveVector,

    #[error("finite-difference step too large: stencils {coarse} and {fine} disagree")]
    StepTooLarge { coarse: f64, fine: f64 },

    #[error("line {line}: {message}")]
    Table { line: usize, message: String },
}

impl Error {
    pub(crate) fn non_convergence(what: &str, detail: impl Into<String>) -> Self {
        Error::NonConvergence {
            what: what.to_string(),
            detail: detail.into(),
        }
    }

    /// True for failures that stem from the numerics rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::Divergence(_)
                | Error::Bracketing(_)
                | Error::PoleOnContour { .. }
                | Error::StepTooLarge { .. }
        )
    }
}
