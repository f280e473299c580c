//! Error types shared by every solver stage.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the spectral solvers.
///
/// The variants distinguish bad inputs (`Domain`, `Config`) from numerical
/// failures (`Integration`, `Truncation`, `Precision`, `Tracing`) and from
/// violations of structural facts the solvers rely on (`ModelViolation`,
/// `Degeneracy`, `MissedRoot`, `NotFound`). The latter group indicates that a
/// computed quantity contradicts what is provable for this operator family,
/// which almost always means the requested parameters left the validated
/// regime.
#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("integration failure at lambda = {lambda}: {reason}")]
    Integration { lambda: Complex64, reason: String },

    #[error(
        "truncation insufficient: eigenvalue {value} escapes every localization disc at |a| = {a_abs:.6}; raise the matrix order"
    )]
    Truncation { value: Complex64, a_abs: f64 },

    #[error("numerical degeneracy: {class_a} eigenvalue {value_a} within {dist:.3e} of {class_b} eigenvalue {value_b}")]
    Degeneracy {
        class_a: &'static str,
        value_a: Complex64,
        class_b: &'static str,
        value_b: Complex64,
        dist: f64,
    },

    #[error(
        "missed root: winding number over [{re_min}, {re_max}] x [{im_min}, {im_max}] reports {expected} zeros, found {found}"
    )]
    MissedRoot {
        re_min: f64,
        re_max: f64,
        im_min: f64,
        im_max: f64,
        expected: i64,
        found: usize,
    },

    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error("precision target {target:.3e} unreachable with series order <= {max_order}")]
    Precision { target: f64, max_order: usize },

    #[error("evaluation point {lambda} lies within {dist:.3e} of the pole at {pole}")]
    PoleProximity {
        lambda: Complex64,
        pole: f64,
        dist: f64,
    },

    #[error("no degeneration found: gap indicator keeps its sign for V in ({lo}, {hi})")]
    NotFound { lo: f64, hi: f64 },

    #[error("band continuation ambiguous on t in [{t_lo}, {t_hi}] after maximal refinement")]
    Tracing { t_lo: f64, t_hi: f64 },
}

pub type Result<T> = std::result::Result<T, SpectralError>;

impl SpectralError {
    /// Process exit code used by the command-line front end:
    /// 2 for usage problems, 3 for model violations, 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            SpectralError::Domain(_) | SpectralError::Config(_) => 2,
            SpectralError::ModelViolation(_)
            | SpectralError::Degeneracy { .. }
            | SpectralError::MissedRoot { .. }
            | SpectralError::NotFound { .. } => 3,
            SpectralError::Integration { .. }
            | SpectralError::Truncation { .. }
            | SpectralError::Precision { .. }
            | SpectralError::PoleProximity { .. }
            | SpectralError::Tracing { .. } => 4,
        }
    }
}
