use crate::error::{Error, Result};
use crate::geometry::{arc_distance, SymmetryGroup, UnitVector2};

/// Angular tolerance when matching `A u_i` against the normal set.
const ORBIT_TOL: f64 = 1e-9;

/// Partition of normal indices into orbits of a symmetry group.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitStructure {
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl OrbitStructure {
    /// Every index in its own orbit.
    pub fn trivial(n: usize) -> Self {
        OrbitStructure {
            orbits: (0..n).map(|i| vec![i]).collect(),
            orbit_of: (0..n).collect(),
        }
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, i: usize) -> usize {
        self.orbit_of[i]
    }

    /// Smallest index of each orbit.
    pub fn representatives(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o[0]).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.orbits.len() == self.orbit_of.len()
    }

    /// Replaces every entry by its orbit mean.
    pub fn average(&self, x: &mut [f64]) {
        if self.is_trivial() {
            return;
        }
        for o in &self.orbits {
            let mean = o.iter().map(|&i| x[i]).sum::<f64>() / o.len() as f64;
            for &i in o {
                x[i] = mean;
            }
        }
    }

    /// Largest relative spread of `x` within an orbit.
    pub fn max_spread(&self, x: &[f64]) -> f64 {
        self.orbits
            .iter()
            .map(|o| {
                let (lo, hi) = o
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &i| {
                        (a.min(x[i]), b.max(x[i]))
                    });
                (hi - lo) / hi.abs().max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    }
}

/// Orbits of `normals` under `g`, found by applying every group element.
pub fn orbits(normals: &[UnitVector2], g: &SymmetryGroup) -> Result<OrbitStructure> {
    let n = normals.len();
    if g.is_trivial() {
        return Ok(OrbitStructure::trivial(n));
    }
    let mut angles: Vec<(f64, usize)> = normals
        .iter()
        .enumerate()
        .map(|(i, u)| (u.theta(), i))
        .collect();
    angles.sort_by(|a, b| a.0.total_cmp(&b.0));
    let find = |t: f64| -> Option<usize> {
        let pos = angles.partition_point(|a| a.0 < t);
        [pos % n, (pos + n - 1) % n]
            .into_iter()
            .find(|&k| arc_distance(angles[k].0, t) <= ORBIT_TOL)
            .map(|k| angles[k].1)
    };
    let elements = g.elements();
    let mut orbit_of = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = Vec::new();
        for a in &elements {
            let j = find(a.apply_angle(normals[i].theta())).ok_or(Error::NotClosedUnderG {
                group: g.to_string(),
            })?;
            if orbit_of[j] == usize::MAX {
                orbit_of[j] = id;
                orbit.push(j);
            } else if orbit_of[j] != id {
                return Err(Error::NotClosedUnderG {
                    group: g.to_string(),
                });
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    Ok(OrbitStructure {
        orbits: out,
        orbit_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn uv(ts: &[f64]) -> Vec<UnitVector2> {
        ts.iter().map(|&t| UnitVector2::new(t)).collect()
    }

    #[test]
    fn axis_normals() {
        let n = uv(&[0.0, FRAC_PI_2, PI, 1.5 * PI]);
        let c4 = orbits(&n, &SymmetryGroup::Cyclic(4)).unwrap();
        assert_eq!(c4.orbits(), &[vec![0, 1, 2, 3]]);
        let refl = orbits(&n, &SymmetryGroup::reflection(0.0)).unwrap();
        assert_eq!(refl.orbits(), &[vec![0], vec![1, 3], vec![2]]);
    }

    #[test]
    fn dihedral_on_eight() {
        let n = uv(&(0..8).map(|k| k as f64 * FRAC_PI_4).collect::<Vec<_>>());
        let o = orbits(&n, &SymmetryGroup::Dihedral { k: 4, axis: 0.0 }).unwrap();
        assert_eq!(o.orbits(), &[vec![0, 2, 4, 6], vec![1, 3, 5, 7]]);
        let d2 = orbits(&n, &SymmetryGroup::Dihedral { k: 2, axis: 0.0 }).unwrap();
        assert_eq!(d2.orbits(), &[vec![0, 4], vec![1, 3, 5, 7], vec![2, 6]]);
    }

    #[test]
    fn not_closed() {
        let n = uv(&[0.0, 2.0, 4.0]);
        assert!(matches!(
            orbits(&n, &SymmetryGroup::Cyclic(3)),
            Err(Error::NotClosedUnderG { .. })
        ));
    }

    #[test]
    fn averaging() {
        let n = uv(&[0.0, FRAC_PI_2, PI, 1.5 * PI]);
        let o = orbits(&n, &SymmetryGroup::reflection(0.0)).unwrap();
        let mut x = [1.0, 2.0, 3.0, 4.0];
        o.average(&mut x);
        assert_eq!(x, [1.0, 3.0, 3.0, 3.0]);
    }
}
