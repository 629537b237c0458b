//! Planar convex-polygon kernel.
//!
//! Bodies are described by support numbers on a fixed set of outward normals.
//! All values are immutable after construction.

mod angle;
mod isometry;
mod polygon;

pub use angle::{arc_distance, canonical_angle, ccw_gap, max_gap, UnitVector2, EPS_ANG};
pub use isometry::{Isometry2, SymmetryGroup};
pub use polygon::{in_positive_hull, support_distance, Polygon, EPS_GEOM};
