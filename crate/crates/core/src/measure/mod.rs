//! Measures on the unit circle and L_p surface area measures of bodies.

mod classify;
mod delta;
mod discrete;
mod flat;
mod spec;
mod surface;

pub use classify::{classify, classify_spec, ClassTag, MeasureClass};
pub use delta::hemisphere_delta;
pub use discrete::{Atom, DiscreteMeasure, DiscreteMeasure3, MERGE_TOL};
pub use flat::weak_distance;
pub use spec::{Density, MeasureSpec};
pub use surface::{lp_surface_measure, lp_surface_measure_3d, qzm_check};
