use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::SolverConfig;

/// Settings of the refinement loop for measures with a density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Atoms in the first discretization.
    pub m0: usize,
    pub m_max: usize,
    /// Factor between successive discretization sizes.
    pub growth: usize,
    /// Stop once successive bodies are this close, relative to the diameter.
    pub tol_body: f64,
    /// and the flat distance to the discrete target is this small, relative
    /// to the total mass.
    pub tol_measure: f64,
    pub solver: SolverConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            m0: 64,
            m_max: 8192,
            growth: 2,
            tol_body: 1e-4,
            tol_measure: 1e-4,
            solver: SolverConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m0 < 3 {
            return Err(Error::InvalidInput(format!(
                "m0 = {} must be at least 3",
                self.m0
            )));
        }
        if self.growth < 2 {
            return Err(Error::InvalidInput(format!(
                "growth = {} must be at least 2",
                self.growth
            )));
        }
        if self.m_max < self.m0 {
            return Err(Error::InvalidInput(format!(
                "m_max = {} is below m0 = {}",
                self.m_max, self.m0
            )));
        }
        for (name, v) in [
            ("tol_body", self.tol_body),
            ("tol_measure", self.tol_measure),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be finite and nonnegative"
                )));
            }
        }
        self.solver.validate()
    }
}
