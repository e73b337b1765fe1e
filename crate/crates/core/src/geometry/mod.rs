//! Points, compact sets, metric projections and the Pompeiu–Hausdorff distance.

mod hausdorff;
mod point;
mod projection;
mod set;

pub use hausdorff::{
    directed_hausdorff, hausdorff, hausdorff_with_resolution, Hausdorff, DEFAULT_FALLBACK_RESOLUTION,
};
pub use point::Point;
pub use projection::{project_onto_hull, HullProjection, HULL_PROJECTION_MAX_ITER, HULL_PROJECTION_TOL};
pub use set::{
    affine_combine, convex_combination, dist_point_set, nearest_point, scale, translate, CompactSet,
    SetDistanceResult,
};

/// Membership tolerance used throughout the library.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
