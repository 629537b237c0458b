use std::f64::consts::PI;

use super::discrete::DiscreteMeasure;
use crate::geometry::{max_gap, EPS_ANG};

/// Atoms this close to the boundary of an open cap are not counted.
const CAP_MARGIN: f64 = 1e-12;

/// `inf_v μ{u : ⟨u, v⟩ > t}` for `t ∈ [0, 1)`.
///
/// The open cap is the arc of half-width `β = arccos t`; sliding it until
/// its left end touches an atom never increases its mass, so only those
/// positions are examined.
pub(crate) fn min_cap_mass(mu: &DiscreteMeasure, t: f64) -> f64 {
    let angles = mu.angles();
    let masses = mu.masses();
    let n = angles.len();
    let width = 2.0 * t.clamp(-1.0, 1.0).acos();
    let unrolled: Vec<f64> = angles
        .iter()
        .copied()
        .chain(angles.iter().map(|a| a + 2.0 * PI))
        .collect();
    let mut prefix = vec![0.0; 2 * n + 1];
    for k in 0..2 * n {
        prefix[k + 1] = prefix[k] + masses[k % n];
    }
    let mut best = f64::INFINITY;
    for k in 0..n {
        let lo = unrolled[k] + CAP_MARGIN;
        let hi = unrolled[k] + width - CAP_MARGIN;
        let a = unrolled.partition_point(|&x| x <= lo);
        let b = unrolled.partition_point(|&x| x < hi);
        best = best.min(if b > a { prefix[b] - prefix[a] } else { 0.0 });
    }
    best
}

/// A `δ ∈ (0, ½)` with `μ(Ω(v, δ)) > δ` for every direction `v` and
/// `μ(S¹) < 1/δ`, where `Ω(v, δ) = {u : ⟨u, v⟩ > δ}`. `None` when some open
/// semicircle carries no mass.
pub fn hemisphere_delta(mu: &DiscreteMeasure) -> Option<f64> {
    let (gap, _) = max_gap(&mu.angles());
    if gap >= PI - EPS_ANG {
        return None;
    }
    // every open cap of half-width arccos t > gap/2 meets the support
    let t = (0.5 * (0.5 * gap).cos()).min(0.25);
    let worst = min_cap_mass(mu, t);
    if worst <= 0.0 {
        return None;
    }
    let c = 0.5 * worst.min(1.0 / mu.total_mass()).min(1.0);
    Some(c.min(t))
}
