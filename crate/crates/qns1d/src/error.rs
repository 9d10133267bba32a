//! Error taxonomy shared by all solver layers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar argument left its mathematical domain (e.g. non-positive v).
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameter regime does not admit the requested operation
    /// (the xi formulation needs eps <= nu).
    #[error("regime error: {0}")]
    Regime(String),

    /// Malformed call arguments (bad derivative order, too few points, ...).
    #[error("argument error: {0}")]
    Argument(String),

    /// The evolving state violated an invariant (positivity floor).
    #[error("state error at t = {t}, node {node}: {message}")]
    State { t: f64, node: usize, message: String },

    /// Configuration file problems, with the offending line when known.
    #[error("config error{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },

    /// A sweep member failed; carries the eps of the failing run.
    #[error("study error at eps = {eps}: {source}")]
    Study {
        eps: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("rate fit needs positive errors and at least 3 points: {0}")]
    DegenerateData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
