use thiserror::Error;

/// Errors raised by set construction, staircase evaluation, calculus and diffusion routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("xi must lie in the open interval (0, 1), got {0}")]
    InvalidXi(f64),

    #[error("{name} must lie in (0, 1], got {value}")]
    InvalidOrder { name: &'static str, value: f64 },

    #[error("depth {depth} exceeds the supported maximum {max}")]
    DepthTooLarge { depth: u32, max: u32 },

    #[error("construction degenerates at step {step}: removal length {removal} >= surviving interval length {length}")]
    DegenerateConstruction { step: u32, removal: f64, length: f64 },

    #[error("invalid interval [{left}, {right}]")]
    InvalidInterval { left: f64, right: f64 },

    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),

    #[error("mesh bound {delta} is below the resolution {resolution} of the pre-fractal")]
    ResolutionTooCoarse { delta: f64, resolution: f64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("mass trend is inconclusive at zeta = {zeta}")]
    InconclusiveTrend { zeta: f64 },

    #[error("difference quotient undefined at x = {x}: staircase increment {increment} below tolerance")]
    UndefinedQuotient { x: f64, increment: f64 },

    #[error("upper and lower sums did not close: gap {gap} at depth {depth}")]
    NonIntegrable { gap: f64, depth: u32 },

    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::InconclusiveTrend { .. }
                | Error::UndefinedQuotient { .. }
                | Error::NonIntegrable { .. }
                | Error::NonConvergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
