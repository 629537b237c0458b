use std::fs;
use std::io::Write;
use std::path::Path;

use lpmink::io::{read_measure, read_polygon};
use lpmink::{
    detect_symmetry, discretize, discretize_level, highdimno_limit_check, highdimno_polytope,
    lp_surface_measure, monge_ampere_check, oboundary_profile, residual, solve_detailed,
    to_json_string, weak_distance, Error, LimitRow, MeasureJson, MeasureSpec, PipelineConfig,
    PolygonJson, Result, SymmetryGroup,
};
use serde_json::json;

use crate::svg;
use crate::{DiscretizeArgs, Example, GalleryArgs, MeasureArgs, SolveArgs, VerifyArgs};

/// Grid used when a density has to be compared against atoms.
const VERIFY_GRID: usize = 8192;
/// Atoms drawn for a measure with a density.
const SVG_GRID: usize = 128;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))
        }
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // a closed pipe (e.g. `| head`) is not an error of ours
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(Error::InvalidInput(format!("stdout: {e}")))
            }
            _ => Ok(()),
        },
    }
}

fn symmetry(spec: &str, mu: &MeasureSpec) -> Result<SymmetryGroup> {
    if spec.eq_ignore_ascii_case("auto") {
        let g = detect_symmetry(mu, 1e-9);
        log::info!("detected symmetry {g}");
        Ok(g)
    } else {
        spec.parse()
    }
}

pub fn cmd_solve(a: SolveArgs) -> Result<u8> {
    let mu = read_measure(&read(&a.input)?)?;
    let g = symmetry(&a.symmetry, &mu)?;
    if !mu.is_invariant(&g, 1e-9) {
        return Err(Error::NotSymmetric {
            group: g.to_string(),
        });
    }
    let mut cfg = PipelineConfig::default();
    if let Some(m0) = a.m0 {
        cfg.m0 = m0;
    }
    if let Some(m_max) = a.m_max {
        cfg.m_max = m_max;
    }
    if let Some(tol) = a.tol {
        cfg.solver.tol_residual = tol;
    }
    if let Some(seed) = a.seed {
        cfg.solver.seed = seed;
    }
    let out = solve_detailed(&mu, a.p, &g, &cfg)?;
    let polygon = PolygonJson::from(&out.polygon);
    match &a.output {
        Some(path) => {
            emit(Some(path), &to_json_string(&polygon)?)?;
            emit(a.report.as_deref(), &to_json_string(&out.report)?)?;
        }
        None => {
            if let Some(path) = &a.report {
                emit(Some(path), &to_json_string(&out.report)?)?;
            }
            emit(
                None,
                &to_json_string(&json!({ "polygon": polygon, "report": out.report }))?,
            )?;
        }
    }
    if let Some(path) = &a.svg {
        let atoms = match mu.as_discrete() {
            Some(d) => d.atoms().iter().map(|x| (x.theta, x.mass)).collect(),
            None => discretize(&mu, SVG_GRID)?
                .atoms()
                .iter()
                .map(|x| (x.theta, x.mass))
                .collect::<Vec<_>>(),
        };
        emit(Some(path), &svg::render(&out.polygon, &atoms))?;
    }
    for w in &out.report.warnings {
        log::warn!("{w}");
    }
    Ok(if out.converged { 0 } else { 3 })
}

pub fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let mu = read_measure(&read(&a.input)?)?;
    let poly = read_polygon(&read(&a.body)?)?;
    let (res, default_tol, kind) = match mu.as_discrete() {
        Some(atomic) => (residual(&poly, &atomic, a.p), 1e-6, "atomic"),
        None => {
            let s = lp_surface_measure(&poly, a.p)?;
            let fine = discretize(&mu, VERIFY_GRID)?;
            (weak_distance(&s, &fine) / mu.total_mass(), 1e-2, "weak")
        }
    };
    let tol = a.tol.unwrap_or(default_tol);
    let ma = monge_ampere_check(&poly, &mu, a.p, VERIFY_GRID / 8)?;
    let pass = res <= tol;
    let body = json!({
        "residual": res,
        "residual_kind": kind,
        "tolerance": tol,
        "pass": pass,
        "monge_ampere": ma,
    });
    emit(a.output.as_deref(), &to_json_string(&body)?)?;
    Ok(if pass { 0 } else { 3 })
}

pub fn cmd_measure(a: MeasureArgs) -> Result<u8> {
    let poly = read_polygon(&read(&a.input)?)?;
    let s = lp_surface_measure(&poly, a.p)?;
    emit(
        a.output.as_deref(),
        &to_json_string(&MeasureJson::from(&s))?,
    )?;
    Ok(0)
}

pub fn cmd_discretize(a: DiscretizeArgs) -> Result<u8> {
    let mu = read_measure(&read(&a.input)?)?;
    let g = symmetry(&a.symmetry, &mu)?;
    let d = discretize_level(&mu, &g, a.m)?;
    emit(
        a.output.as_deref(),
        &to_json_string(&MeasureJson::from(&d))?,
    )?;
    Ok(0)
}

pub fn cmd_gallery(a: GalleryArgs) -> Result<u8> {
    let csv = match a.example {
        Example::Oboundary => oboundary_profile(a.p, a.n, a.samples)?.to_csv(),
        Example::Highdimno => {
            let rows = highdimno_limit_check(a.p, &a.m)?;
            if let (Some(path), Some(&m)) = (&a.polytope, a.m.last()) {
                emit(
                    Some(path),
                    &to_json_string(&highdimno_polytope(a.p, m)?.translated)?,
                )?;
            }
            LimitRow::csv(&rows)
        }
    };
    emit(a.output.as_deref(), &csv)?;
    Ok(0)
}
