use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{canonical_angle, SymmetryGroup, UnitVector2};
use crate::measure::{Atom, DiscreteMeasure, MeasureSpec};
use crate::solver::orbits;

/// Index `j ∈ 1..=m` of the arc `((j−1)2π/m, j2π/m]` containing `theta`.
fn arc_index(theta: f64, m: usize) -> usize {
    let x = canonical_angle(theta) / (TAU / m as f64);
    let r = x.round();
    let j = if (x - r).abs() <= 1e-9 {
        r as usize
    } else {
        x.ceil() as usize
    };
    match j {
        0 => m,
        j => j.min(m),
    }
}

/// `μ_m`: `m` atoms at `2πj/m`, `j = 1..m`, atom `j` carrying `1/m²` plus the
/// mass of the arc `((j−1)2π/m, j2π/m]`. The regularizer puts mass in every
/// open semicircle, so `μ_m` is always in general position.
pub fn discretize(mu: &MeasureSpec, m: usize) -> Result<DiscreteMeasure> {
    if m < 3 {
        return Err(Error::InvalidInput(format!("m = {m} must be at least 3")));
    }
    let step = TAU / m as f64;
    let mut mass = vec![1.0 / (m as f64 * m as f64); m];
    if let Some(d) = mu.density() {
        for (j, w) in mass.iter_mut().enumerate() {
            *w += d.integral(j as f64 * step, (j + 1) as f64 * step);
        }
    }
    for a in mu.atoms() {
        mass[arc_index(a.theta, m) - 1] += a.mass;
    }
    DiscreteMeasure::new(
        mass.into_iter()
            .enumerate()
            .map(|(j, w)| Atom::new(canonical_angle((j + 1) as f64 * step), w)),
    )
}

/// Offsets tried for the base point, as fractions of half the grid step.
const BASE_OFFSETS: [f64; 15] = [
    0.5, 0.25, 0.75, 0.125, 0.375, 0.625, 0.875, 0.0625, 0.1875, 0.3125, 0.4375, 0.5625, 0.6875,
    0.8125, 0.9375,
];

/// `G`-symmetric discretization. The circle is cut at the orbit of a base
/// point `x₀ = φ + δ` under the symmetry group of the regular `lm`-gon with a
/// vertex at `φ` (the axis of `G`, or 0), giving arcs centred at `φ + jπ/(lm)`;
/// each arc's mass goes to its midpoint. `δ` is chosen so that no atom of `μ`
/// sits on a cut. Masses are equalized across `G`-orbits, so the output is
/// exactly invariant. No regularizer is added: total mass is preserved.
pub fn discretize_symmetric(
    mu: &MeasureSpec,
    g: &SymmetryGroup,
    l: usize,
    m: usize,
) -> Result<DiscreteMeasure> {
    if l < 3 || m < 2 {
        return Err(Error::InvalidInput(format!(
            "need l >= 3 and m >= 2, got l = {l}, m = {m}"
        )));
    }
    let k = g.rotation_order();
    if !l.is_multiple_of(k) {
        return Err(Error::InvalidInput(format!(
            "{g} is not a symmetry group of the regular {l}-gon"
        )));
    }
    if !mu.is_invariant(g, 1e-9) {
        return Err(Error::NotSymmetric {
            group: g.to_string(),
        });
    }
    let phi = match *g {
        SymmetryGroup::Dihedral { axis, .. } => axis,
        _ => 0.0,
    };
    let n = l * m;
    let step = TAU / n as f64;
    let clearance = |delta: f64| -> f64 {
        mu.atoms()
            .iter()
            .map(|a| {
                let r = (a.theta - phi).rem_euclid(step);
                [delta, step - delta, delta + step, -delta]
                    .iter()
                    .map(|c| (r - c).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let delta = BASE_OFFSETS
        .iter()
        .map(|t| t * 0.5 * step)
        .find(|&d| clearance(d) >= 1e-6 * step)
        .ok_or(Error::CannotAvoidAtoms)?;

    let mut centers = Vec::with_capacity(2 * n);
    let mut mass = Vec::with_capacity(2 * n);
    for j in 0..n {
        let c = phi + j as f64 * step;
        centers.push(c);
        mass.push(mu.arc_mass(c - delta, c + delta));
        centers.push(c + 0.5 * step);
        mass.push(mu.arc_mass(c + delta, c + step - delta));
    }
    let normals: Vec<UnitVector2> = centers.iter().map(|&t| UnitVector2::new(t)).collect();
    let orb = orbits(&normals, g)?;
    let total: f64 = mass.iter().sum();
    let spread = orb
        .orbits()
        .iter()
        .map(|o| {
            let (lo, hi) = o
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &i| {
                    (a.min(mass[i]), b.max(mass[i]))
                });
            hi - lo
        })
        .fold(0.0, f64::max);
    if spread > 1e-9 * total {
        return Err(Error::NotSymmetric {
            group: g.to_string(),
        });
    }
    orb.average(&mut mass);
    DiscreteMeasure::from_nonnegative(
        centers
            .into_iter()
            .zip(mass)
            .map(|(t, w)| Atom::new(canonical_angle(t), w)),
    )
}
