use std::f64::consts::PI;

use crate::geometry::SymmetryGroup;
use crate::measure::MeasureSpec;

/// Largest rotation order tried for measures without atoms.
const MAX_DENSITY_ORDER: usize = 24;

/// The largest finite subgroup of O(2) leaving `mu` invariant to relative
/// `tol`, among cyclic and dihedral groups whose order is compatible with
/// the atoms (or at most 24 for a pure density). Dihedral groups are
/// preferred over cyclic ones of the same rotation order.
pub fn detect_symmetry(mu: &MeasureSpec, tol: f64) -> SymmetryGroup {
    let n_atoms = mu.atoms().len();
    let max_k = if n_atoms > 0 {
        n_atoms
    } else {
        MAX_DENSITY_ORDER
    };
    // reflection axes map some reference angle onto another feature angle
    let features: Vec<f64> = if n_atoms > 0 {
        mu.atoms().iter().map(|a| a.theta).collect()
    } else {
        mu.density()
            .map(|d| d.samples().0.to_vec())
            .unwrap_or_default()
    };
    for k in (1..=max_k).rev() {
        if n_atoms > 0 && !n_atoms.is_multiple_of(k) {
            continue;
        }
        let rot = if k == 1 {
            SymmetryGroup::Trivial
        } else {
            SymmetryGroup::Cyclic(k)
        };
        if k > 1 && !mu.is_invariant(&rot, tol) {
            continue;
        }
        if let Some(&t0) = features.first() {
            let sector = PI / k as f64;
            let mut axes: Vec<f64> = features
                .iter()
                .flat_map(|&t| {
                    let a = 0.5 * (t0 + t);
                    [a, a + 0.5 * PI]
                })
                .map(|a| a.rem_euclid(sector))
                .collect();
            axes.sort_by(f64::total_cmp);
            axes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
            for axis in axes {
                // report the axis nearest zero when it is numerically zero
                let axis = if (sector - axis).abs() <= 1e-12 {
                    0.0
                } else {
                    axis
                };
                let g = SymmetryGroup::Dihedral { k, axis };
                if mu.is_invariant(&g, tol) {
                    return g;
                }
            }
        }
        if k > 1 {
            return rot;
        }
    }
    SymmetryGroup::Trivial
}
