use std::f64::consts::PI;

use crate::error::{check_p_open, Error, Result};
use crate::geometry::{support_distance, Isometry2, Polygon, SymmetryGroup, UnitVector2};
use crate::measure::{
    classify_spec, lp_surface_measure, weak_distance, ClassTag, DiscreteMeasure, MeasureClass,
    MeasureSpec,
};
use crate::solver::{residual, solve_discrete, solve_discrete_from, LoopEntry, SolveReport};

use super::config::PipelineConfig;
use super::discretize::{discretize, discretize_symmetric};
use super::monge_ampere::monge_ampere_check;
use super::semicircle::{mass_below, solve_semicircle};

/// Result of [`solve_detailed`]: the best body found, whether the stopping
/// rule was met, and the report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub polygon: Polygon,
    pub report: SolveReport,
    pub converged: bool,
}

/// Solves `S_{K,p} = μ` for a general measure, returning a polygon (the
/// final discretization's solution when `μ` has a density).
pub fn solve(
    mu: &MeasureSpec,
    p: f64,
    g: &SymmetryGroup,
    cfg: &PipelineConfig,
) -> Result<(Polygon, SolveReport)> {
    let out = solve_detailed(mu, p, g, cfg)?;
    if !out.converged {
        return Err(Error::NoConvergence {
            best_residual: out.report.residual,
        });
    }
    Ok((out.polygon, out.report))
}

/// Like [`solve`], but a refinement loop that reaches `m_max` without
/// stabilizing still returns its last body, with `converged = false`.
pub fn solve_detailed(
    mu: &MeasureSpec,
    p: f64,
    g: &SymmetryGroup,
    cfg: &PipelineConfig,
) -> Result<Outcome> {
    check_p_open(p)?;
    cfg.validate()?;
    let cls = classify_spec(mu)?;
    if let ClassTag::AntipodalPair { .. } = cls.tag {
        return Err(Error::AntipodalPair);
    }
    if let Some(atomic) = mu.as_discrete() {
        let (polygon, report) = if cls.is_general_position() {
            solve_discrete(&atomic, p, g, &cfg.solver)?
        } else {
            solve_semicircle(&atomic, &cls, p, &cfg.solver)?
        };
        return Ok(Outcome {
            polygon,
            report,
            converged: true,
        });
    }
    match cls.tag {
        ClassTag::Semicircle { v, w } => solve_half(mu, &cls, v, w, p, cfg),
        _ => {
            let mut out = refine(mu, &cls, p, g, cfg)?;
            let grid = (out.report.m_final.unwrap_or(0) / 8).max(64);
            out.report.monge_ampere_residual =
                monge_ampere_check(&out.polygon, mu, p, grid)?.value();
            Ok(out)
        }
    }
}

/// Atoms per discretization level for the symmetric variant: `2·l·m'` with
/// `l` the smallest multiple of the rotation order that is at least 3.
fn symmetric_level(g: &SymmetryGroup, atoms: usize) -> (usize, usize) {
    let k = g.rotation_order();
    let l = k * 3usize.div_ceil(k);
    (l, (atoms / (2 * l)).max(2))
}

/// Level-`m` discretization used by the refinement loop: [`discretize`] for
/// the trivial group, otherwise [`discretize_symmetric`] with about `m` atoms.
pub fn discretize_level(mu: &MeasureSpec, g: &SymmetryGroup, m: usize) -> Result<DiscreteMeasure> {
    if g.is_trivial() {
        discretize(mu, m)
    } else {
        let (l, mm) = symmetric_level(g, m);
        discretize_symmetric(mu, g, l, mm)
    }
}

fn refine(
    mu: &MeasureSpec,
    cls: &MeasureClass,
    p: f64,
    g: &SymmetryGroup,
    cfg: &PipelineConfig,
) -> Result<Outcome> {
    let total = mu.total_mass();
    let mut report = SolveReport::new(cls, g);
    let mut prev: Option<(Polygon, DiscreteMeasure)> = None;
    let mut best: Option<(Polygon, SolveReport)> = None;
    let mut first_diameter = None;
    let mut m = cfg.m0;
    let mut converged = false;
    while m <= cfg.m_max {
        let mu_m = discretize_level(mu, g, m)?;
        let warm: Option<Vec<f64>> = prev
            .as_ref()
            .map(|(poly, _)| mu_m.angles().iter().map(|&t| poly.support_at(t)).collect());
        let solved = solve_discrete_from(&mu_m, p, g, &cfg.solver, warm.as_deref());
        let (poly, rep) = match solved {
            Ok(x) => x,
            Err(Error::NoConvergence { best_residual }) => {
                report.warnings.push(format!(
                    "m = {}: no convergence (residual {best_residual:e})",
                    mu_m.len()
                ));
                m *= cfg.growth;
                continue;
            }
            Err(e) => return Err(e),
        };
        report.outer_iters += rep.outer_iters;
        report.newton_iters += rep.newton_iters;
        report.c = rep.c;
        let s = lp_surface_measure(&poly, p)?;
        let diameter = poly.diameter();
        let first = *first_diameter.get_or_insert(diameter);
        if diameter > 10.0 * first {
            report.warnings.push(format!(
                "m = {}: diameter {diameter} exceeds ten times the first ({first})",
                mu_m.len()
            ));
        }
        let (weak_change, body_change) = match &prev {
            Some((q, sq)) => (
                Some(weak_distance(&s, sq) / total),
                Some(support_distance(&poly, q) / diameter),
            ),
            None => (None, None),
        };
        report.loop_history.push(LoopEntry {
            m: mu_m.len(),
            residual: rep.residual,
            diameter,
            weak_change,
            body_change,
        });
        report.residual = rep.residual;
        report.m_final = Some(mu_m.len());
        log::info!(
            "m = {}: residual {:e}, diameter {diameter:.6}, body change {body_change:?}",
            mu_m.len(),
            rep.residual
        );
        let fit = weak_distance(&s, &mu_m) / total;
        best = Some((poly.clone(), rep));
        if body_change.is_some_and(|b| b <= cfg.tol_body) && fit <= cfg.tol_measure {
            converged = true;
            break;
        }
        prev = Some((poly, s));
        m *= cfg.growth;
    }
    let Some((polygon, _)) = best else {
        return Err(Error::NoConvergence {
            best_residual: f64::INFINITY,
        });
    };
    if !converged {
        report.warnings.push(format!(
            "m_max = {} reached before the bodies stabilized",
            cfg.m_max
        ));
    }
    Ok(Outcome {
        polygon,
        report,
        converged,
    })
}

/// Semicircle class with a density: solve `μ + A_# μ` with the reflection
/// symmetry, then cut by `{⟨x, w⟩ ≥ 0}`.
fn solve_half(
    mu: &MeasureSpec,
    cls: &MeasureClass,
    v: UnitVector2,
    w: UnitVector2,
    p: f64,
    cfg: &PipelineConfig,
) -> Result<Outcome> {
    let axis = v.theta().rem_euclid(PI);
    let doubled = mu.sum(&mu.pushforward(Isometry2::Reflection(axis)));
    let g = SymmetryGroup::reflection(axis);
    let dcls = classify_spec(&doubled)?;
    let full = refine(&doubled, &dcls, p, &g, cfg)?;
    let mut normals = Vec::new();
    let mut support = Vec::new();
    for (u, h) in full.polygon.normals().iter().zip(full.polygon.support()) {
        if u.vector().dot(&w.vector()) > -1e-12 {
            normals.push(*u);
            support.push(*h);
        }
    }
    normals.push(w.opposite());
    support.push(0.0);
    let polygon = Polygon::from_support(&normals, &support)?;
    let mut report = full.report;
    report.classification = cls.name().to_string();
    // the cut body solves the upper half of the final symmetric discretization
    if let Some(m) = report.m_final {
        let (l, mm) = symmetric_level(&g, m);
        let target = discretize_symmetric(&doubled, &g, l, mm)?;
        let half = DiscreteMeasure::from_pairs(
            &target
                .atoms()
                .iter()
                .filter_map(|a| {
                    let d = UnitVector2::new(a.theta).vector().dot(&w.vector());
                    if d > 1e-12 {
                        Some((a.theta, a.mass))
                    } else if d > -1e-12 {
                        Some((a.theta, 0.5 * a.mass))
                    } else {
                        None
                    }
                })
                .collect::<Vec<_>>(),
        )?;
        report.residual = residual(&polygon, &half, p);
    }
    let s = lp_surface_measure(&polygon, p)?;
    let below = mass_below(&s, w);
    if below > 1e-10 * mu.total_mass() {
        report
            .warnings
            .push(format!("mass {below:e} on the open semicircle around -w"));
    }
    let grid = (report.m_final.unwrap_or(0) / 8).max(64);
    report.monge_ampere_residual = monge_ampere_check(&polygon, mu, p, grid)?.value();
    Ok(Outcome {
        polygon,
        report,
        converged: full.converged,
    })
}
