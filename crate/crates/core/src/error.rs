//! Crate-wide error type.

use crate::systems::Trajectory;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A vector had the wrong length for the system or model it was used with.
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    /// A bifurcation parameter was outside the range the operation accepts.
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    /// Requested energy is outside the bounded-motion range of the system.
    #[error("energy {energy} out of range (0, {max})")]
    EnergyOutOfRange { energy: f64, max: f64 },

    /// Rejection sampling did not find a state after the retry budget.
    #[error("state sampling failed after {attempts} attempts")]
    SamplingFailed { attempts: usize },

    /// The integrated state went non-finite; the finite prefix is preserved.
    #[error("trajectory truncated at t={t}: non-finite state")]
    TruncatedTrajectory { t: f64, partial: Box<Trajectory> },

    /// The integration step sizes were inconsistent.
    #[error("invalid step sizes: {0}")]
    InvalidStep(String),

    /// An operation that needs samples got an empty batch.
    #[error("empty batch")]
    EmptyBatch,

    /// A trajectory was too short for the requested operation.
    #[error("trajectory too short: need at least {need} samples, got {got}")]
    TrajectoryTooShort { need: usize, got: usize },

    /// Training encountered a non-finite loss.
    #[error("training diverged at epoch {epoch}, step {step}: loss = {loss}")]
    TrainingDiverged { epoch: usize, step: usize, loss: f64 },

    /// The potential-error mask contained no cells.
    #[error("empty mask: no grid cells below the threshold")]
    EmptyMask,

    /// The least-squares design matrix was rank deficient.
    #[error("rank-deficient design matrix (column {column})")]
    RankDeficient { column: usize },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// A data or model file could not be parsed.
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
