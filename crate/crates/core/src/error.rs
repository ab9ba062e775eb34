use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("asymmetric {what} ({first} vs {second}) is not supported by the two-mode reduction")]
    Asymmetric {
        what: &'static str,
        first: f64,
        second: f64,
    },

    #[error("model is not PT-symmetric (gain {gain} != dissipative coupling {coupling})")]
    NotPtSymmetric { gain: f64, coupling: f64 },

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("initial condition not supported here: {0}")]
    UnsupportedInitialCondition(String),

    #[error("thermal occupation undefined for mode frequency {frequency} at temperature {temperature}")]
    ThermalOccupation { frequency: f64, temperature: f64 },

    #[error("integrator step size underflow at t = {t} (h = {step})")]
    StepSizeUnderflow { t: f64, step: f64 },

    #[error("moment symmetry violated during integration (defect {0:e})")]
    SymmetryViolation(f64),

    #[error("integrator exceeded {0} steps")]
    TooManySteps(usize),

    #[error("symplectic eigenvalue is complex: discriminant {discriminant}")]
    InvalidRegime { discriminant: f64 },

    #[error("sweep specification: {0}")]
    Sweep(String),

    #[error("configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
