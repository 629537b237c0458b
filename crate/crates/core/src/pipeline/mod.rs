//! End-to-end solve for general measures: discretization (plain and
//! symmetric), the semicircle reduction, the refinement loop over growing
//! discretizations, and the pointwise Monge–Ampère check of the limit.

mod config;
mod discretize;
mod monge_ampere;
mod refine;
mod semicircle;
mod symmetry;

pub use config::PipelineConfig;
pub use discretize::{discretize, discretize_symmetric};
pub use monge_ampere::{monge_ampere_check, monge_ampere_residual, MongeAmpere};
pub use refine::{discretize_level, solve, solve_detailed, Outcome};
pub use semicircle::solve_semicircle;
pub use symmetry::detect_symmetry;
