//! Indicator statistics of smooth planar domains: shared-boundary classification, the
//! surface- and volume-order covariance limits, and the variance floor.

mod classify;
mod domain;
mod expr;
mod limits;

pub use classify::{
    boundary_runs, classify_shared_boundary, intersection_area, BoundaryRun, PointClass, SharedArc,
    SharedBoundary, CLASSIFIER_SAMPLES, DEFAULT_MATCH_TOLERANCE,
};
pub use domain::{BoundaryCurve, DomainShape, SmoothDomain};
pub use expr::{AngleExpr, Dual};
pub use limits::{
    isotropic_surface_moment, normal_moment, surface_covariance_limit, variance_floor,
    volume_covariance_limit,
};
