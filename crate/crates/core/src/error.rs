use thiserror::Error;

/// Failures reported by the evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: String },

    /// `|arg a| >= pi/2` (or the analogous condition on an internal argument).
    #[error("sector condition violated: |arg| = {arg:.6} but must be < pi/2")]
    Sector { arg: f64 },

    #[error("wrong regime: {0}")]
    Regime(String),

    #[error("series did not converge: {0}")]
    Convergence(String),

    #[error("term magnitudes still decreasing at index {m_max}; no least term found")]
    NoMinimum { m_max: usize },

    #[error("direct summation needs more than {max_terms} terms")]
    Budget { max_terms: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
