use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Vector2};

use super::angle::{arc_distance, canonical_angle};
use crate::error::{Error, Result};

/// An element of O(2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Isometry2 {
    /// Counterclockwise rotation by the angle.
    Rotation(f64),
    /// Reflection across the line through the origin at the given axis angle.
    Reflection(f64),
}

impl Isometry2 {
    pub const IDENTITY: Isometry2 = Isometry2::Rotation(0.0);

    pub fn apply_angle(self, theta: f64) -> f64 {
        match self {
            Isometry2::Rotation(phi) => canonical_angle(theta + phi),
            Isometry2::Reflection(axis) => canonical_angle(2.0 * axis - theta),
        }
    }

    pub fn matrix(self) -> Matrix2<f64> {
        match self {
            Isometry2::Rotation(phi) => {
                let (s, c) = phi.sin_cos();
                Matrix2::new(c, -s, s, c)
            }
            Isometry2::Reflection(axis) => {
                let (s, c) = (2.0 * axis).sin_cos();
                Matrix2::new(c, s, s, -c)
            }
        }
    }

    pub fn apply_vector(self, x: &Vector2<f64>) -> Vector2<f64> {
        self.matrix() * x
    }

    pub fn determinant(self) -> f64 {
        match self {
            Isometry2::Rotation(_) => 1.0,
            Isometry2::Reflection(_) => -1.0,
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(self, other: Isometry2) -> Isometry2 {
        use Isometry2::*;
        match (self, other) {
            (Rotation(a), Rotation(b)) => Rotation(canonical_angle(a + b)),
            (Reflection(a), Reflection(b)) => Rotation(canonical_angle(2.0 * (a - b))),
            (Rotation(a), Reflection(b)) => Reflection((b + a / 2.0).rem_euclid(PI)),
            (Reflection(a), Rotation(b)) => Reflection((a - b / 2.0).rem_euclid(PI)),
        }
    }

    pub fn inverse(self) -> Isometry2 {
        match self {
            Isometry2::Rotation(a) => Isometry2::Rotation(canonical_angle(-a)),
            r @ Isometry2::Reflection(_) => r,
        }
    }

    /// Equality as maps of the circle, up to `tol` on the defining angle.
    pub fn approx_eq(self, other: Isometry2, tol: f64) -> bool {
        match (self, other) {
            (Isometry2::Rotation(a), Isometry2::Rotation(b)) => arc_distance(a, b) <= tol,
            // axes are lines: angle defined modulo π
            (Isometry2::Reflection(a), Isometry2::Reflection(b)) => {
                arc_distance(2.0 * a, 2.0 * b) <= 2.0 * tol
            }
            _ => false,
        }
    }
}

/// Finite subgroups of O(2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SymmetryGroup {
    Trivial,
    /// Rotations by multiples of `2π/k`.
    Cyclic(usize),
    /// `k` rotations plus `k` reflections whose axes are `axis + jπ/k`.
    Dihedral {
        k: usize,
        axis: f64,
    },
}

impl SymmetryGroup {
    /// Reflection across a single axis, `{id, A}`.
    pub fn reflection(axis: f64) -> Self {
        SymmetryGroup::Dihedral { k: 1, axis }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(
            self,
            SymmetryGroup::Trivial | SymmetryGroup::Cyclic(1) | SymmetryGroup::Cyclic(0)
        )
    }

    pub fn order(&self) -> usize {
        match *self {
            SymmetryGroup::Trivial => 1,
            SymmetryGroup::Cyclic(k) => k.max(1),
            SymmetryGroup::Dihedral { k, .. } => 2 * k.max(1),
        }
    }

    /// Number of rotations in the group.
    pub fn rotation_order(&self) -> usize {
        match *self {
            SymmetryGroup::Trivial => 1,
            SymmetryGroup::Cyclic(k) | SymmetryGroup::Dihedral { k, .. } => k.max(1),
        }
    }

    /// All group elements; the identity comes first.
    pub fn elements(&self) -> Vec<Isometry2> {
        let k = self.rotation_order();
        let mut out: Vec<Isometry2> = (0..k)
            .map(|j| Isometry2::Rotation(TAU * j as f64 / k as f64))
            .collect();
        if let SymmetryGroup::Dihedral { axis, .. } = *self {
            out.extend(
                (0..k).map(|j| {
                    Isometry2::Reflection((axis + PI * j as f64 / k as f64).rem_euclid(PI))
                }),
            );
        }
        out
    }
}

impl fmt::Display for SymmetryGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SymmetryGroup::Trivial => write!(f, "none"),
            SymmetryGroup::Cyclic(k) => write!(f, "C{k}"),
            SymmetryGroup::Dihedral { k, axis } => write!(f, "D{k}:{axis}"),
        }
    }
}

impl FromStr for SymmetryGroup {
    type Err = Error;

    /// Parses `none`, `C<k>`, `D<k>` or `D<k>:<axis-angle>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("symmetry: cannot parse {s:?}"));
        let s = s.trim();
        if s.eq_ignore_ascii_case("none") || s.eq_ignore_ascii_case("trivial") {
            return Ok(SymmetryGroup::Trivial);
        }
        let (head, rest) = s.split_at(1);
        match head {
            "C" | "c" => {
                let k: usize = rest.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(if k == 1 {
                    SymmetryGroup::Trivial
                } else {
                    SymmetryGroup::Cyclic(k)
                })
            }
            "D" | "d" => {
                let (k, axis) = match rest.split_once(':') {
                    Some((k, a)) => (k, a.parse::<f64>().map_err(|_| bad())?),
                    None => (rest, 0.0),
                };
                let k: usize = k.parse().map_err(|_| bad())?;
                if k == 0 || !axis.is_finite() {
                    return Err(bad());
                }
                Ok(SymmetryGroup::Dihedral { k, axis })
            }
            _ => Err(bad()),
        }
    }
}
