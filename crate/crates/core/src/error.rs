use alloc::string::String;

use crate::grid::Axis;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("spectral differentiation requested on non-periodic {0:?} axis")]
    SpectralOnNonPeriodic(Axis),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("field has {got} values, grid expects {expected}")]
    FieldLength { expected: usize, got: usize },

    #[error("unknown gallery entry `{0}`")]
    UnknownGalleryEntry(String),

    #[error("invalid parameter `{name}` for `{entry}`: {reason}")]
    InvalidParameter {
        entry: String,
        name: String,
        reason: String,
    },

    #[error("degenerate immersion at node ({i}, {j}): |X_x × X_y| = {cross:e}")]
    DegenerateImmersion { i: usize, j: usize, cross: f64 },

    #[error("non-finite value in {what} at node ({i}, {j})")]
    NonFinite { what: String, i: usize, j: usize },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("chart is not conformal: residual {residual:e} exceeds tolerance {tol:e}")]
    ConformalityViolation { residual: f64, tol: f64 },

    #[error("every node is umbilic; phase analysis is impossible")]
    TotallyUmbilic,

    #[error("reparametrization is degenerate: |φ'| = {0:e}")]
    DegenerateReparametrization(f64),

    #[error("not a candidate Bonnet pair: max|u - ũ| = {max_du:e}, max|H - H̃| = {max_dh:e}")]
    NotACandidatePair { max_du: f64, max_dh: f64 },

    #[error(
        "mean curvature is not constant (nonconstancy fraction {fraction}); \
         the Codazzi equation forbids rotating the Hopf differential"
    )]
    NotCmc { fraction: f64 },

    #[error("invalid contour: {0}")]
    ContourInvalid(String),

    #[error("insufficient support for differentiation: {nodes} usable nodes (need at least 16)")]
    InsufficientSupport { nodes: usize },

    #[error("convergence study failed: {0}")]
    Diagnostic(String),
}

pub type Result<T> = core::result::Result<T, Error>;
