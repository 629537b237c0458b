//! The inner problem: maximize `Φ(ξ) = Σ α_i (h_i − ⟨ξ, u_i⟩)^p` over `ξ ∈ P`.

use nalgebra::{Matrix2, Vector2};

use super::config::SolverConfig;
use crate::error::{Error, Result};
use crate::geometry::{max_gap, Polygon, EPS_ANG, EPS_GEOM};
use crate::measure::DiscreteMeasure;

/// Masses of `mu` aligned with the normals of `poly` (zero where `mu` has no
/// atom). Every atom of `mu` must sit on a normal.
pub(crate) fn align_masses(poly: &Polygon, mu: &DiscreteMeasure) -> Result<Vec<f64>> {
    let mut alpha = vec![0.0; poly.len()];
    let mut used = 0;
    for (i, u) in poly.normals().iter().enumerate() {
        if let Some(j) = mu.index_of(u.theta(), 1e-9) {
            alpha[i] = mu.atoms()[j].mass;
            used += 1;
        }
    }
    if used != mu.len() {
        return Err(Error::InvalidInput(
            "measure has atoms at directions that are not normals of the polygon".into(),
        ));
    }
    Ok(alpha)
}

/// `Φ_P(ξ)` for a measure supported on normals of `P`.
pub fn phi(poly: &Polygon, xi: &Vector2<f64>, mu: &DiscreteMeasure, p: f64) -> Result<f64> {
    let alpha = align_masses(poly, mu)?;
    let mut total = 0.0;
    for (index, ((u, h), a)) in poly
        .normals()
        .iter()
        .zip(poly.support())
        .zip(&alpha)
        .enumerate()
    {
        let slack = h - u.dot(xi);
        if slack < -EPS_GEOM {
            return Err(Error::XiOutside { index, slack });
        }
        if *a > 0.0 {
            total += a * slack.max(0.0).powf(p);
        }
    }
    Ok(total)
}

/// Inner maximizer for raw data: unit normals `u`, support numbers `h`, masses
/// `alpha`. Returns `ξ` and the number of Newton iterations.
pub(crate) fn maximize(
    u: &[Vector2<f64>],
    h: &[f64],
    alpha: &[f64],
    p: f64,
    start: Vector2<f64>,
    cfg: &SolverConfig,
) -> Result<(Vector2<f64>, usize)> {
    let slack =
        |x: &Vector2<f64>| -> Vec<f64> { h.iter().zip(u).map(|(h, u)| h - u.dot(x)).collect() };
    let value = |s: &[f64]| -> f64 {
        s.iter()
            .zip(alpha)
            .filter(|(_, a)| **a > 0.0)
            .map(|(s, a)| a * s.powf(p))
            .sum()
    };
    let mut x = start;
    let mut s = slack(&x);
    if s.iter().zip(alpha).any(|(s, a)| *a > 0.0 && *s <= 0.0) {
        return Err(Error::XiOutside {
            index: s.iter().position(|v| *v <= 0.0).unwrap_or(0),
            slack: s.iter().cloned().fold(f64::INFINITY, f64::min),
        });
    }
    let mut f = value(&s);
    for it in 0..cfg.max_inner_iters {
        let mut grad = Vector2::zeros();
        let mut hess = Matrix2::zeros();
        let mut scale = 0.0;
        for ((si, ai), ui) in s.iter().zip(alpha).zip(u) {
            if *ai <= 0.0 {
                continue;
            }
            let d1 = ai * p * si.powf(p - 1.0);
            scale += d1;
            grad -= ui * d1;
            hess += ui * ui.transpose() * (d1 * (p - 1.0) / si);
        }
        let gnorm = grad.norm();
        if gnorm <= cfg.tol_inner * scale {
            return Ok((x, it));
        }
        // Newton ascent on the concave objective; gradient ascent if singular
        let dir = match hess.try_inverse() {
            Some(inv) if hess.determinant() > 0.0 => {
                let d = -(inv * grad);
                if d.dot(&grad) > 0.0 {
                    d
                } else {
                    grad * (1.0 / scale)
                }
            }
            _ => grad * (1.0 / scale),
        };
        // keep every weighted slack positive
        let mut t_max = f64::INFINITY;
        for ((si, ai), ui) in s.iter().zip(alpha).zip(u) {
            let rate = ui.dot(&dir);
            if *ai > 0.0 && rate > 0.0 {
                t_max = t_max.min(si / rate);
            }
        }
        let mut t = (0.99 * t_max).min(1.0);
        let small = gnorm <= 1e-6 * scale;
        let mut accepted = false;
        for _ in 0..60 {
            let xn = x + dir * t;
            let sn = slack(&xn);
            if sn.iter().zip(alpha).all(|(s, a)| *a <= 0.0 || *s > 0.0) {
                let fn_ = value(&sn);
                // near the optimum the gain is below rounding; accept feasible Newton steps
                if fn_ >= f + 1e-4 * t * grad.dot(&dir) || (small && fn_ >= f - 1e-15 * f.abs()) {
                    x = xn;
                    s = sn;
                    f = fn_;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            if gnorm <= 1e-7 * scale {
                return Ok((x, it));
            }
            return Err(Error::MaxItersExceeded(it));
        }
    }
    Err(Error::MaxItersExceeded(cfg.max_inner_iters))
}

/// Whether the directions carrying positive mass avoid every closed semicircle.
pub(crate) fn weights_in_general_position(angles: &[f64], alpha: &[f64]) -> bool {
    let mut a: Vec<f64> = angles
        .iter()
        .zip(alpha)
        .filter(|(_, w)| **w > 0.0)
        .map(|(t, _)| *t)
        .collect();
    a.sort_by(f64::total_cmp);
    a.len() >= 3 && max_gap(&a).0 < std::f64::consts::PI - EPS_ANG
}

/// The unique interior maximizer `ξ(P)` of `Φ_P`.
pub fn xi_of_polygon(
    poly: &Polygon,
    mu: &DiscreteMeasure,
    p: f64,
    cfg: &SolverConfig,
) -> Result<Vector2<f64>> {
    crate::error::check_p_open(p)?;
    let alpha = align_masses(poly, mu)?;
    if alpha.iter().any(|a| *a < 0.0) {
        return Err(Error::InvalidInput("masses must be positive".into()));
    }
    let angles: Vec<f64> = poly.normals().iter().map(|u| u.theta()).collect();
    if !weights_in_general_position(&angles, &alpha) {
        return Err(Error::NoInteriorMax);
    }
    let u: Vec<Vector2<f64>> = poly.normals().iter().map(|n| n.vector()).collect();
    let verts = poly.vertices();
    let start = verts.iter().fold(Vector2::zeros(), |a, v| a + v) / verts.len() as f64;
    maximize(&u, poly.support(), &alpha, p, start, cfg).map(|r| r.0)
}
