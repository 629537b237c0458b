use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Relative tolerance on `max_i |S_i − α_i| / α_i`.
    pub tol_residual: f64,
    /// Relative gradient tolerance for the inner maximization.
    pub tol_inner: f64,
    pub max_outer_iters: usize,
    pub max_inner_iters: usize,
    pub max_newton_iters: usize,
    /// Step shrink factor on rejection.
    pub backtrack: f64,
    /// Initial relative step of the descent phase.
    pub initial_step: f64,
    /// Edges shorter than this (relative to the perimeter) count as collapsed.
    pub eps_edge: f64,
    /// Hand over to Newton once the proportionality defect drops below this.
    pub newton_switch: f64,
    /// Number of starts; starts after the first are random perturbations.
    pub multi_start: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol_residual: 1e-6,
            tol_inner: 1e-10,
            max_outer_iters: 10_000,
            max_inner_iters: 200,
            max_newton_iters: 100,
            backtrack: 0.5,
            initial_step: 1.0,
            eps_edge: 1e-12,
            newton_switch: 5e-2,
            multi_start: 1,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("tol_residual", self.tol_residual),
            ("tol_inner", self.tol_inner),
            ("initial_step", self.initial_step),
            ("eps_edge", self.eps_edge),
            ("newton_switch", self.newton_switch),
        ];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "solver.{name} must be > 0, got {v}"
                )));
            }
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(Error::InvalidInput(format!(
                "solver.backtrack must lie in (0, 1), got {}",
                self.backtrack
            )));
        }
        if self.multi_start == 0 || self.max_inner_iters == 0 {
            return Err(Error::InvalidInput(
                "solver.multi_start and solver.max_inner_iters must be >= 1".into(),
            ));
        }
        Ok(())
    }
}
