//! Constructive solver for the planar L_p Minkowski problem with `0 < p < 1`.
//!
//! Given a finite Borel measure `μ` on the unit circle, the crate builds a
//! convex body `K` with `o ∈ K` whose L_p surface area measure
//! `dS_{K,p} = h_K^{1-p} dS_K` equals `μ`:
//!
//! - [`geometry`]: exact convex-polygon kernel driven by support numbers.
//! - [`measure`]: atomic and density measures on S¹, L_p surface area
//!   measures, classification, the bounded-Lipschitz (flat) distance.
//! - [`solver`]: variational solve of the discrete problem (inner
//!   maximizer, volume-constrained descent, Newton polish, symmetry orbits).
//! - [`pipeline`]: discretization of general measures, semicircle
//!   reduction, refinement loop and Monge–Ampère residuals.
//! - [`gallery`]: generators for the origin-on-boundary profile and the
//!   unbounded polytope sequence in R³.
//! - [`io`]: JSON schemas shared with the command-line front end.
//!
//! The only nonexistence case is a measure supported on one antipodal pair,
//! reported as [`Error::AntipodalPair`].

pub mod error;
pub mod gallery;
pub mod geometry;
pub mod io;
pub mod measure;
pub mod pipeline;
pub mod solver;

pub use error::{Error, Result};
pub use gallery::{
    highdimno_limit_check, highdimno_polytope, oboundary_profile, BoundaryGraphProfile, LimitRow,
    Polytope3, Polytope3Instance, ProfileRow,
};
pub use geometry::{
    in_positive_hull, support_distance, Isometry2, Polygon, SymmetryGroup, UnitVector2,
};
pub use io::{
    format_f64, from_json_str, read_measure, read_polygon, to_json_string, MeasureJson, PolygonJson,
};
pub use measure::{
    classify, classify_spec, hemisphere_delta, lp_surface_measure, lp_surface_measure_3d,
    qzm_check, weak_distance, Atom, ClassTag, Density, DiscreteMeasure, DiscreteMeasure3,
    MeasureClass, MeasureSpec,
};
pub use pipeline::{
    detect_symmetry, discretize, discretize_level, discretize_symmetric, monge_ampere_check,
    monge_ampere_residual, solve, solve_detailed, solve_semicircle, MongeAmpere, Outcome,
    PipelineConfig,
};
pub use solver::{
    orbits, phi, residual, solve_discrete, solve_discrete_from, xi_of_polygon, LoopEntry,
    OrbitStructure, SolveReport, SolverConfig,
};

pub use nalgebra::{Vector2, Vector3};
