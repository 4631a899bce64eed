use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid array pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("correlation magnitude {0} exceeds 1")]
    CorrelationOutOfRange(f64),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// The angle block of the Fisher information is singular (Ψ ≤ 0).
    #[error("singular Fisher information (psi = {psi:e}) at spacing {delta:e}")]
    SingularInformation { psi: f64, delta: f64 },

    /// Fully correlated sources with real correlation: no closed-form ARL exists.
    #[error("no closed-form ARL for real fully correlated sources (rho = {rho_re})")]
    NoClosedForm { rho_re: f64 },

    /// αкφ/γ² exceeds 1, the closed-form root is complex.
    #[error("closed form outside its domain (alpha*kappa*phi/gamma^2 = {ratio:e})")]
    DomainError { ratio: f64 },

    #[error("no sign change of the Smith equation found below the ambiguity cap {cap:e}")]
    NoBracket { cap: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in the CSV `status` column.
    pub fn status_tag(&self) -> &'static str {
        match self {
            Error::InvalidGeometry(_) => "invalid-geometry",
            Error::InvalidPattern(_) => "invalid-pattern",
            Error::InvalidSignal(_) => "invalid-signal",
            Error::CorrelationOutOfRange(_) => "correlation-out-of-range",
            Error::InvalidScenario(_) => "invalid-scenario",
            Error::SingularInformation { .. } => "singular-information",
            Error::NoClosedForm { .. } => "no-closed-form",
            Error::DomainError { .. } => "domain-error",
            Error::NoBracket { .. } => "no-bracket",
            Error::InvalidConfig(_) => "invalid-config",
            Error::InvalidSweep(_) => "invalid-sweep",
            Error::Parse(_) => "parse-error",
        }
    }
}
