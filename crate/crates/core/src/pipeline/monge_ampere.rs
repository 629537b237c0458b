use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Polygon;
use crate::measure::{Density, MeasureSpec};

/// Outcome of the pointwise Monge–Ampère check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MongeAmpere {
    Residual {
        value: f64,
        masked: usize,
    },
    /// The measure is not dominated by its density, so `h''` is singular.
    NotApplicable,
}

impl MongeAmpere {
    pub fn value(&self) -> Option<f64> {
        match *self {
            MongeAmpere::Residual { value, .. } => Some(value),
            MongeAmpere::NotApplicable => None,
        }
    }
}

/// Grid points within `radius` cells of a spike of `|h'' + h|` above
/// `factor` times its median.
fn corner_mask(curv: &[f64], factor: f64, radius: usize) -> Vec<bool> {
    let n = curv.len();
    let mut sorted: Vec<f64> = curv.iter().map(|v| v.abs()).collect();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[n / 2];
    let mut mask = vec![false; n];
    for (k, v) in curv.iter().enumerate() {
        if v.abs() > factor * median {
            for d in 0..=2 * radius {
                mask[(k + n + d - radius) % n] = true;
            }
        }
    }
    mask
}

/// `max |h^{1−p}(h'' + h) − ρ| / max(ρ, ε)` over a uniform grid of `grid`
/// angles, with `h = h_P` and `h''` from central second differences. `ρ` is
/// the density of `μ` with respect to arc length, i.e. twice the right-hand
/// side `f` of `h^{1−p}(h'' + h) = 2f`. Points near kinks of `h_P` are masked.
pub fn monge_ampere_residual(
    poly: &Polygon,
    density: &Density,
    p: f64,
    grid: usize,
) -> Result<MongeAmpere> {
    if grid < 64 {
        return Err(Error::InvalidInput(format!(
            "grid = {grid} must be at least 64"
        )));
    }
    let dt = TAU / grid as f64;
    let theta: Vec<f64> = (0..grid).map(|k| k as f64 * dt).collect();
    let h: Vec<f64> = theta.iter().map(|&t| poly.support_at(t)).collect();
    let curv: Vec<f64> = (0..grid)
        .map(|k| {
            let (a, b, c) = (h[(k + grid - 1) % grid], h[k], h[(k + 1) % grid]);
            (a - 2.0 * b + c) / (dt * dt) + b
        })
        .collect();
    let mask = corner_mask(&curv, 10.0, 2);
    let rho: Vec<f64> = theta.iter().map(|&t| density.eval(t)).collect();
    let eps = 1e-12
        * rho
            .iter()
            .cloned()
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    let mut masked = 0;
    for k in 0..grid {
        if mask[k] {
            masked += 1;
            continue;
        }
        let lhs = h[k].max(0.0).powf(1.0 - p) * curv[k];
        worst = worst.max((lhs - rho[k]).abs() / rho[k].max(eps));
    }
    Ok(MongeAmpere::Residual {
        value: worst,
        masked,
    })
}

/// [`monge_ampere_residual`] for a general measure: not applicable unless the
/// density carries at least 90% of the mass.
pub fn monge_ampere_check(
    poly: &Polygon,
    mu: &MeasureSpec,
    p: f64,
    grid: usize,
) -> Result<MongeAmpere> {
    match mu.density() {
        Some(d) if mu.density_mass() >= 0.9 * mu.total_mass() => {
            monge_ampere_residual(poly, d, p, grid)
        }
        _ => Ok(MongeAmpere::NotApplicable),
    }
}
