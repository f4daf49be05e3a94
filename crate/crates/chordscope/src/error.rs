//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} must be positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("grid size must be even and at least 8, got {n}")]
    BadGridSize { n: usize },

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("grid too narrow: edge amplitude {edge:.3e} exceeds {limit:.1e}")]
    GridTooNarrow { edge: f64, limit: f64 },

    #[error("state does not fit the grid after translation (edge amplitude {edge:.3e})")]
    GridOverflow { edge: f64 },

    #[error("superposition norm {norm:.3e} too small to normalize")]
    DegenerateSuperposition { norm: f64 },

    #[error("mixture weights must be nonnegative and sum to 1 (sum = {sum})")]
    BadWeights { sum: f64 },

    #[error("point ({p}, {q}) lies outside the sampled grid")]
    OffGrid { p: f64, q: f64 },

    #[error("moment order {order} not supported (1..=4)")]
    MomentOrder { order: usize },

    #[error("generator matrix is not Hermitian (max deviation {dev:.3e})")]
    NotHermitian { dev: f64 },

    #[error("curve is not convex (curvature changes sign)")]
    NonConvex,

    #[error("no chord realization: |xi| exceeds the maximal chord in its direction")]
    NoRealizations,

    #[error("chord realization too close to the caustic (tangents nearly parallel)")]
    CausticProximity,

    #[error("reflection centre q-component {q} is not on the position grid")]
    OffGridCentre { q: f64 },

    #[error("projection has (near-)zero weight {weight:.3e}")]
    ZeroWeightProjection { weight: f64 },

    #[error("projected-chord denominator {denom:.3e} too close to zero")]
    SingularDenominator { denom: f64 },

    #[error("state lacks the requested reflection symmetry (commutator norm {norm:.3e})")]
    NotParitySymmetric { norm: f64 },

    #[error("energy contour is empty or does not close")]
    OpenContour,

    #[error("root finding failed: {0}")]
    RootFind(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
