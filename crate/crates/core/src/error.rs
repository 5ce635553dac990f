use thiserror::Error;

/// Errors produced by curve construction, simulation, design and file handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid tension curve: {0}")]
    InvalidCurve(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid energy samples: {0}")]
    InvalidSamples(String),

    #[error("tension {tension} N is above the curve's range (supremum {supremum} N)")]
    TensionUnreachable { tension: f64, supremum: f64 },

    #[error("unloading tension exceeds loading tension at strain {strain}")]
    BranchOrderViolation { strain: f64 },

    #[error("time {t} s is outside the constant-deceleration window [0, {t_max}] s")]
    OutsideIdealWindow { t: f64, t_max: f64 },

    #[error("velocity never reached zero within the simulated window")]
    NoArrest,

    #[error("climber position {y} m exceeded the elongation limit {limit} m at t = {t} s")]
    ElongationExceeded { t: f64, y: f64, limit: f64 },

    #[error("relative energy drift {drift:e} at t = {t} s; reduce the step size")]
    StepTooLarge { t: f64, drift: f64 },

    #[error("invalid carabiner angle/friction: {0}")]
    InvalidAngle(String),

    #[error("no segment-tension equilibrium for displacement {displacement} m")]
    NoEquilibrium { displacement: f64 },

    #[error("climber did not come to rest within {t_max} s")]
    NoRest { t_max: f64 },

    #[error("no sampled law arrested the fall within the elongation budget")]
    Infeasible,

    #[error("law does not arrest the fall within the elongation budget")]
    NotArresting,

    #[error(
        "feasible law produced peak {peak} N below the lower bound {bound} N; \
         simulator inconsistency (knots: {knots:?})"
    )]
    BoundViolation {
        peak: f64,
        bound: f64,
        knots: Vec<(f64, f64)>,
    },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
