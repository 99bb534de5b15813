//! Fixed points, invariant segments, heteroclinic connections and Lyapunov
//! scans of the three-clock map on `S`.

mod fixed_points;
mod heteroclinic;
mod lyapunov;
mod segments;

pub use fixed_points::{
    classify, find_fixed_points, known_fixed_points, FixedPointRecord, FixedPointSearch,
    NonConvergentSeed, SeedFailure, StabilityClass, DEDUP_RADIUS, FIXED_POINT_RESIDUAL,
    NEWTON_MAX_ITER, NON_HYPERBOLIC_TOL,
};
pub use heteroclinic::{
    heteroclinic_census, trace_heteroclinic, HeteroclinicCensus, HeteroclinicKind,
    HeteroclinicOrbit, HETEROCLINIC_ARRIVAL, HETEROCLINIC_STEP,
};
pub use lyapunov::{
    lyapunov_value, orbital_derivative, orbital_derivative_scan, LyapunovReport, Region,
    LYAPUNOV_FAR_RADIUS, LYAPUNOV_MAX_TOL, LYAPUNOV_ZERO_TOL,
};
pub use segments::{
    invariant_segments, verify_invariance, InvariantSegment, RestrictionMap, SegmentCheck,
    SegmentName, INVARIANCE_TOL,
};

use thiserror::Error;

use crate::params::ParamError;
use crate::phase::PhasePoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("{point} is not a fixed point: |Ω|∞ = {residual:e}")]
    NotAFixedPoint { point: PhasePoint, residual: f64 },
    #[error("Jacobian at {0} has complex eigenvalues")]
    ComplexEigenvalues(PhasePoint),
    #[error("{0} lies outside the closed region {1:?}")]
    OutsideRegion(PhasePoint, Region),
    #[error("heteroclinic source {0} is neither a saddle nor a repeller")]
    SourceNotUnstable(PhasePoint),
    #[error("direction ({0}, {1}) is not an unstable direction of the source")]
    NotUnstableDirection(f64, f64),
    #[error("seed {0} lies outside S")]
    SeedOutsideSquare(PhasePoint),
    #[error("orbit left S at {0}")]
    LeftSquare(PhasePoint),
    #[error("orbit from {source_point} did not reach a fixed point within {max_iter} iterations (last {last})")]
    NoConvergence {
        source_point: PhasePoint,
        last: PhasePoint,
        max_iter: usize,
    },
    #[error("connection {from:?} → {to:?} is not a saddle/repeller/attractor heteroclinic")]
    UnexpectedConnection {
        from: StabilityClass,
        to: StabilityClass,
    },
    #[error("grid resolution {0} is too small")]
    GridTooSmall(usize),
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
}
