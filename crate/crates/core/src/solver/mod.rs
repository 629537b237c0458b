//! Variational solver for the discrete problem `S_{P,p} = μ`.
//!
//! The outer problem minimizes `max_ξ Φ_P(ξ)` over unit-area polygons with the
//! prescribed normals by projected envelope-gradient descent; once the
//! L_p surface measure is nearly proportional to `μ`, a Newton iteration on
//! the square system finishes the job.

mod config;
mod discrete;
mod inner;
pub(crate) mod kernel;
mod orbits;

pub use config::SolverConfig;
pub use discrete::{residual, solve_discrete, solve_discrete_from, LoopEntry, SolveReport};
pub use inner::{phi, xi_of_polygon};
pub use orbits::{orbits, OrbitStructure};
