//! Root finding, Vieta maps in both directions, and continuation of roots
//! and k-th roots along paths.

mod kth_root;
mod roots;
mod trace;

pub use kth_root::{continue_kth_root, kth_root_branch, nearest_kth_root};
pub use roots::{
    all_roots, coefficient_paths_from_root_paths, coefficients_from_roots, discriminant,
    sort_roots, Polynomial,
};
pub use trace::{trace_roots, trace_roots_from, track_roots, MonodromyTrace, RootTrajectorySet};

use thiserror::Error;

use crate::paths::PathError;
use crate::perm::PermError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("polynomial degree must be at least 1")]
    ZeroDegree,
    #[error("root finding failed: residual {residual:e} after {sweeps} sweeps")]
    RootFindingFailed { residual: f64, sweeps: usize },
    #[error("root collision on path at t = {param} (separation {separation:e})")]
    RootCollision { param: f64, separation: f64 },
    #[error("refinement exhausted at t = {param}")]
    RefinementExhausted { param: f64 },
    #[error("degenerate start: |discriminant| = {0:e}")]
    DegenerateStart(f64),
    #[error("coefficient paths do not start at the polynomial (gap {0:e})")]
    StartMismatch(f64),
    #[error("coefficient bundle is not closed")]
    BundleNotClosed,
    #[error("tracked roots do not return onto the starting roots")]
    EndpointMismatch,
    #[error("branch point encountered at t = {param}")]
    BranchPoint { param: f64 },
    #[error("bundle has {got} paths, expected {expected}")]
    WidthMismatch { got: usize, expected: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Perm(#[from] PermError),
}
