use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{canonical_angle, ccw_gap, Isometry2, UnitVector2};

/// Atoms closer than this (in radians) are merged by adding their masses.
pub const MERGE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub theta: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(theta: f64, mass: f64) -> Self {
        Atom { theta, mass }
    }
}

/// Sorts atoms by canonical angle and merges those within [`MERGE_TOL`],
/// including across the `2π ≡ 0` seam. Zero masses are dropped.
pub(crate) fn merge_atoms(atoms: impl IntoIterator<Item = Atom>) -> Vec<Atom> {
    let mut v: Vec<Atom> = atoms
        .into_iter()
        .filter(|a| a.mass != 0.0)
        .map(|a| Atom::new(canonical_angle(a.theta), a.mass))
        .collect();
    v.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let mut out: Vec<Atom> = Vec::with_capacity(v.len());
    for a in v {
        match out.last_mut() {
            Some(last) if a.theta - last.theta <= MERGE_TOL => last.mass += a.mass,
            _ => out.push(a),
        }
    }
    if out.len() > 1 {
        let n = out.len();
        if ccw_gap(out[n - 1].theta, out[0].theta) <= MERGE_TOL {
            let tail = out.pop().unwrap();
            out[0].mass += tail.mass;
        }
    }
    out
}

/// A finite atomic measure on S¹ with positive masses and distinct angles.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let atoms: Vec<Atom> = atoms.into_iter().collect();
        for (i, a) in atoms.iter().enumerate() {
            if !a.theta.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "atoms[{i}].theta is not finite"
                )));
            }
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "atoms[{i}].mass must be positive and finite, got {}",
                    a.mass
                )));
            }
        }
        Self::from_nonnegative(atoms)
    }

    /// Like [`DiscreteMeasure::new`] but silently drops zero masses.
    pub(crate) fn from_nonnegative(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let atoms = merge_atoms(atoms);
        if atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        Ok(DiscreteMeasure { atoms })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(t, m)| Atom::new(t, m)))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.theta).collect()
    }

    pub fn masses(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.mass).collect()
    }

    pub fn directions(&self) -> Vec<UnitVector2> {
        self.atoms
            .iter()
            .map(|a| UnitVector2::new(a.theta))
            .collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Mass of the atom within `tol` of `theta`, or zero.
    pub fn mass_at(&self, theta: f64, tol: f64) -> f64 {
        self.index_of(theta, tol)
            .map_or(0.0, |i| self.atoms[i].mass)
    }

    /// Index of the atom within `tol` of `theta`.
    pub fn index_of(&self, theta: f64, tol: f64) -> Option<usize> {
        let t = canonical_angle(theta);
        let n = self.atoms.len();
        let pos = self.atoms.partition_point(|a| a.theta < t);
        [pos % n, (pos + n - 1) % n]
            .into_iter()
            .find(|&i| crate::geometry::arc_distance(self.atoms[i].theta, t) <= tol)
    }

    pub fn scaled(&self, s: f64) -> DiscreteMeasure {
        DiscreteMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom::new(a.theta, a.mass * s))
                .collect(),
        }
    }

    /// Image measure `A_# μ`.
    pub fn pushforward(&self, a: Isometry2) -> DiscreteMeasure {
        DiscreteMeasure {
            atoms: merge_atoms(
                self.atoms
                    .iter()
                    .map(|x| Atom::new(a.apply_angle(x.theta), x.mass)),
            ),
        }
    }

    /// `μ + ν`.
    pub fn sum(&self, other: &DiscreteMeasure) -> DiscreteMeasure {
        DiscreteMeasure {
            atoms: merge_atoms(self.atoms.iter().chain(&other.atoms).copied()),
        }
    }

    /// Whether `A_# μ = μ` atom by atom, masses to relative `tol`.
    pub fn is_invariant_under(&self, a: Isometry2, tol: f64) -> bool {
        self.atoms.iter().all(|x| {
            self.index_of(a.apply_angle(x.theta), 1e-9)
                .is_some_and(|j| (self.atoms[j].mass - x.mass).abs() <= tol * x.mass)
        })
    }
}

/// A finite atomic measure on S² (only used for the 3-D gallery).
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure3 {
    pub atoms: Vec<(Vector3<f64>, f64)>,
}

impl DiscreteMeasure3 {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// Sum of masses of atoms within angle `tol` of `u`.
    pub fn mass_near(&self, u: &Vector3<f64>, tol: f64) -> f64 {
        let u = u.normalize();
        self.atoms
            .iter()
            .filter(|(v, _)| v.normalize().dot(&u).clamp(-1.0, 1.0).acos() <= tol)
            .map(|a| a.1)
            .sum()
    }
}
