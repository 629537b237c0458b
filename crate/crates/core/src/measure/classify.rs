use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::discrete::DiscreteMeasure;
use super::spec::MeasureSpec;
use crate::error::{Error, Result};
use crate::geometry::{canonical_angle, UnitVector2, EPS_ANG};

/// Position of the support of a measure relative to closed semicircles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum ClassTag {
    /// No closed semicircle contains the support.
    GeneralPosition,
    /// The support is the single direction `w`.
    SingleDirection { w: UnitVector2 },
    /// The support lies in the closed semicircle from `v` to `−v` through `w`.
    Semicircle { v: UnitVector2, w: UnitVector2 },
    /// The support is exactly `{v, −v}`.
    AntipodalPair { v: UnitVector2 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureClass {
    pub tag: ClassTag,
    /// Width of the smallest closed arc containing the support.
    pub arc_width: f64,
}

impl MeasureClass {
    pub fn name(&self) -> &'static str {
        match self.tag {
            ClassTag::GeneralPosition => "general_position",
            ClassTag::SingleDirection { .. } => "single_direction",
            ClassTag::Semicircle { .. } => "semicircle",
            ClassTag::AntipodalPair { .. } => "antipodal_pair",
        }
    }

    pub fn is_general_position(&self) -> bool {
        matches!(self.tag, ClassTag::GeneralPosition)
    }
}

impl fmt::Display for MeasureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Largest uncovered gap of a family of closed arcs `(start, width)` on S¹
/// (points have width zero), and the angle where coverage resumes after it.
/// A nonpositive gap means the arcs cover the circle.
fn largest_gap(arcs: &[(f64, f64)]) -> (f64, f64) {
    let mut v: Vec<(f64, f64)> = arcs.iter().map(|&(s, w)| (canonical_angle(s), w)).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = v.len();
    // two laps so that arcs wrapping past 2π are accounted for on the second
    let mut reach = f64::NEG_INFINITY;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for lap in 0..2 {
        for &(s, w) in &v {
            let s = s + TAU * lap as f64;
            if lap == 1 && s - reach > best.0 {
                best = (s - reach, canonical_angle(s));
            }
            reach = reach.max(s + w);
        }
    }
    if n == 1 && v[0].1 == 0.0 {
        return (TAU, v[0].0);
    }
    best
}

fn classify_arcs(arcs: &[(f64, f64)], points_only: bool) -> MeasureClass {
    let (gap, start) = largest_gap(arcs);
    let width = (TAU - gap).clamp(0.0, TAU);
    if points_only && arcs.len() == 1 {
        return MeasureClass {
            tag: ClassTag::SingleDirection {
                w: UnitVector2::new(arcs[0].0),
            },
            arc_width: 0.0,
        };
    }
    if points_only && arcs.len() == 2 && (gap - PI).abs() <= EPS_ANG {
        return MeasureClass {
            tag: ClassTag::AntipodalPair {
                v: UnitVector2::new(arcs[0].0),
            },
            arc_width: PI,
        };
    }
    if gap < PI - EPS_ANG {
        return MeasureClass {
            tag: ClassTag::GeneralPosition,
            arc_width: width,
        };
    }
    let w = UnitVector2::new(start + 0.5 * width);
    MeasureClass {
        tag: ClassTag::Semicircle {
            v: w.rotated(FRAC_PI_2),
            w,
        },
        arc_width: width,
    }
}

pub fn classify(mu: &DiscreteMeasure) -> Result<MeasureClass> {
    if mu.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let arcs: Vec<(f64, f64)> = mu.angles().into_iter().map(|t| (t, 0.0)).collect();
    Ok(classify_arcs(&arcs, true))
}

/// Classification of a general measure; the density contributes the closed
/// arcs on which it is not identically zero.
pub fn classify_spec(mu: &MeasureSpec) -> Result<MeasureClass> {
    let mut arcs: Vec<(f64, f64)> = mu.atoms().iter().map(|a| (a.theta, 0.0)).collect();
    let points_only = match mu.density() {
        Some(d) => {
            let s = d.support_arcs();
            let empty = s.is_empty();
            arcs.extend(s);
            empty
        }
        None => true,
    };
    if arcs.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    Ok(classify_arcs(&arcs, points_only))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Atom, Density};

    fn cls(ts: &[f64]) -> MeasureClass {
        let m =
            DiscreteMeasure::from_pairs(&ts.iter().map(|&t| (t, 1.0)).collect::<Vec<_>>()).unwrap();
        classify(&m).unwrap()
    }

    #[test]
    fn axis_atoms_are_general() {
        assert_eq!(
            cls(&[0.0, FRAC_PI_2, PI, 1.5 * PI]).tag,
            ClassTag::GeneralPosition
        );
    }

    #[test]
    fn antipodal_and_single() {
        assert!(matches!(
            cls(&[0.0, PI]).tag,
            ClassTag::AntipodalPair { .. }
        ));
        assert!(
            matches!(cls(&[2.0]).tag, ClassTag::SingleDirection { w } if (w.theta() - 2.0).abs() < 1e-15)
        );
    }

    #[test]
    fn semicircle_midpoint() {
        let c = cls(&[PI / 3.0, 2.0 * PI / 3.0]);
        match c.tag {
            ClassTag::Semicircle { v, w } => {
                assert!((w.theta() - FRAC_PI_2).abs() < 1e-14);
                assert!((v.theta() - PI).abs() < 1e-14);
            }
            other => panic!("{other:?}"),
        }
        assert!((c.arc_width - PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn closed_semicircle_with_three_atoms() {
        // 0, π/2, π: the closed upper half contains them
        match cls(&[0.0, FRAC_PI_2, PI]).tag {
            ClassTag::Semicircle { w, .. } => assert!((w.theta() - FRAC_PI_2).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semicircle_across_seam() {
        match cls(&[-0.3, 0.2]).tag {
            ClassTag::Semicircle { w, .. } => {
                assert!(crate::geometry::arc_distance(w.theta(), -0.05) < 1e-14)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn density_support_arcs() {
        let full = MeasureSpec::from_density(Density::constant(1.0).unwrap()).unwrap();
        assert_eq!(classify_spec(&full).unwrap().tag, ClassTag::GeneralPosition);

        // bump on [0.2, 1.2] plus an atom at 3.0: closed arc [0.2, 3.0]
        let d = Density::new(&[0.2, 0.7, 1.2], &[0.0, 1.0, 0.0]).unwrap();
        let spec = MeasureSpec::new(vec![Atom::new(3.0, 1.0)], Some(d)).unwrap();
        let c = classify_spec(&spec).unwrap();
        match c.tag {
            ClassTag::Semicircle { w, .. } => assert!((w.theta() - 1.6).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
        assert!((c.arc_width - 2.8).abs() < 1e-14);
    }

    #[test]
    fn wrapping_density_arc_covers_start() {
        // support arc wraps through 0 and covers the atom at 0.1
        let d = Density::new(&[0.5, 5.0, 6.0], &[0.0, 0.0, 1.0]).unwrap();
        let spec = MeasureSpec::new(vec![Atom::new(0.1, 1.0)], Some(d)).unwrap();
        let c = classify_spec(&spec).unwrap();
        assert!((c.arc_width - (0.5 + TAU - 5.0)).abs() < 1e-12);
    }
}
