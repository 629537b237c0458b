use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

/// Tolerance for comparing normal angles (sorting, duplicate detection,
/// antipodality).
pub const EPS_ANG: f64 = 1e-12;

/// Reduce an angle to `[0, 2π)`.
#[inline]
pub fn canonical_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid of a tiny negative number rounds up to exactly 2π
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Counterclockwise angle from `from` to `to`, in `[0, 2π)`.
#[inline]
pub fn ccw_gap(from: f64, to: f64) -> f64 {
    canonical_angle(to - from)
}

/// Geodesic (arc) distance on S¹, in `[0, π]`.
#[inline]
pub fn arc_distance(a: f64, b: f64) -> f64 {
    let d = ccw_gap(a, b);
    d.min(TAU - d)
}

/// Largest counterclockwise gap between consecutive angles of a sorted,
/// canonical list, together with the index `k` such that the gap runs from
/// `angles[k]` to `angles[(k + 1) % n]`.
pub fn max_gap(angles: &[f64]) -> (f64, usize) {
    let n = angles.len();
    if n == 0 {
        return (TAU, 0);
    }
    if n == 1 {
        return (TAU, 0);
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for k in 0..n {
        let g = if k + 1 < n {
            angles[k + 1] - angles[k]
        } else {
            angles[0] + TAU - angles[k]
        };
        if g > best.0 {
            best = (g, k);
        }
    }
    best
}

/// A direction on the unit circle, stored by its canonical angle.
#[derive(Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitVector2 {
    theta: f64,
}

impl UnitVector2 {
    pub fn new(theta: f64) -> Self {
        Self {
            theta: canonical_angle(theta),
        }
    }

    pub fn from_vector(v: Vector2<f64>) -> Self {
        Self::new(v.y.atan2(v.x))
    }

    #[inline]
    pub fn theta(self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn vector(self) -> Vector2<f64> {
        let (s, c) = self.theta.sin_cos();
        Vector2::new(c, s)
    }

    #[inline]
    pub fn dot(self, x: &Vector2<f64>) -> f64 {
        let (s, c) = self.theta.sin_cos();
        c * x.x + s * x.y
    }

    pub fn rotated(self, phi: f64) -> Self {
        Self::new(self.theta + phi)
    }

    pub fn opposite(self) -> Self {
        self.rotated(PI)
    }

    pub fn is_antipodal(self, other: Self, tol: f64) -> bool {
        (arc_distance(self.theta, other.theta) - PI).abs() <= tol
    }

    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        arc_distance(self.theta, other.theta) <= tol
    }
}

impl fmt::Debug for UnitVector2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "∠{}", self.theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_wraps_into_range() {
        assert_eq!(canonical_angle(-1e-300), 0.0);
        assert!((canonical_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert!((canonical_angle(5.0 * PI) - PI).abs() < 1e-14);
    }

    #[test]
    fn antipodal_across_wraparound() {
        let a = UnitVector2::new(0.1);
        let b = UnitVector2::new(0.1 + PI);
        assert!(a.is_antipodal(b, EPS_ANG));
        assert!(!a.is_antipodal(UnitVector2::new(0.1 + PI - 1e-6), EPS_ANG));
        assert!(UnitVector2::new(TAU - 1e-13).approx_eq(UnitVector2::new(0.0), EPS_ANG));
    }

    #[test]
    fn max_gap_finds_wrap_gap() {
        let (g, k) = max_gap(&[0.5, 1.0, 2.0]);
        assert_eq!(k, 2);
        assert!((g - (TAU - 1.5)).abs() < 1e-15);
    }
}
