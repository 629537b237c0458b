use std::f64::consts::{FRAC_PI_3, PI};

use crate::error::{check_p_open, Error, Result};
use crate::geometry::{Isometry2, Polygon, SymmetryGroup, UnitVector2};
use crate::measure::{lp_surface_measure, ClassTag, DiscreteMeasure, MeasureClass};
use crate::solver::{residual, solve_discrete, SolveReport, SolverConfig};

/// Mass of `S_{K,p}` on the open semicircle centred at `-w`.
pub(crate) fn mass_below(s: &DiscreteMeasure, w: UnitVector2) -> f64 {
    s.atoms()
        .iter()
        .filter(|a| UnitVector2::new(a.theta).vector().dot(&w.vector()) < -1e-12)
        .map(|a| a.mass)
        .sum()
}

/// Solves `S_{K,p} = μ` for an atomic `μ` whose support lies in a closed
/// semicircle (and is not an antipodal pair).
///
/// A single atom at `w` is matched by a dilate of the equilateral triangle
/// with normals `w`, `w ± 2π/3` and support numbers `(1, 0, 0)`. Otherwise
/// `μ + A_# μ`, with `A` the reflection fixing `v`, is in general position;
/// its reflection-symmetric solution cut by `{⟨x, w⟩ ≥ 0}` solves `μ`.
pub fn solve_semicircle(
    mu: &DiscreteMeasure,
    cls: &MeasureClass,
    p: f64,
    cfg: &SolverConfig,
) -> Result<(Polygon, SolveReport)> {
    check_p_open(p)?;
    match cls.tag {
        ClassTag::AntipodalPair { .. } => Err(Error::AntipodalPair),
        ClassTag::GeneralPosition => Err(Error::PreconditionViolated(
            "measure is in general position; use solve_discrete".into(),
        )),
        ClassTag::SingleDirection { w } => {
            let normals = [w, w.rotated(2.0 * FRAC_PI_3), w.rotated(-2.0 * FRAC_PI_3)];
            // the unit-height triangle has its w-edge of length 2/√3
            let lambda = mu.total_mass() / (2.0 / 3f64.sqrt());
            let lambda0 = lambda.powf(1.0 / (2.0 - p));
            let poly = Polygon::from_support(&normals, &[lambda0, 0.0, 0.0])?;
            let mut report = SolveReport::new(cls, &SymmetryGroup::Trivial);
            report.residual = residual(&poly, mu, p);
            Ok((poly, report))
        }
        ClassTag::Semicircle { v, w } => {
            let a = Isometry2::Reflection(v.theta().rem_euclid(PI));
            let doubled = mu.sum(&mu.pushforward(a));
            let g = SymmetryGroup::reflection(v.theta().rem_euclid(PI));
            let (full, mut report) = solve_discrete(&doubled, p, &g, cfg)?;
            let mut normals = Vec::new();
            let mut support = Vec::new();
            for (u, h) in full.normals().iter().zip(full.support()) {
                if u.vector().dot(&w.vector()) > -1e-12 {
                    normals.push(*u);
                    support.push(*h);
                }
            }
            normals.push(w.opposite());
            support.push(0.0);
            let poly = Polygon::from_support(&normals, &support)?;
            report.classification = cls.name().to_string();
            report.residual = residual(&poly, mu, p);
            let s = lp_surface_measure(&poly, p)?;
            let below = mass_below(&s, w);
            if below > 1e-10 * mu.total_mass() {
                report
                    .warnings
                    .push(format!("mass {below:e} on the open semicircle around -w"));
            }
            for d in [v, v.opposite()] {
                let want = mu.mass_at(d.theta(), 1e-9);
                let got = s.mass_at(d.theta(), 1e-9);
                if (got - want).abs() > 1e-8 * mu.total_mass() {
                    report
                        .warnings
                        .push(format!("mass at {} is {got} instead of {want}", d.theta()));
                }
            }
            if !(report.residual <= cfg.tol_residual) {
                return Err(Error::NoConvergence {
                    best_residual: report.residual,
                });
            }
            Ok((poly, report))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::classify;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn single_atom_triangle() {
        let mu = DiscreteMeasure::from_pairs(&[(0.4, 3.0)]).unwrap();
        let cls = classify(&mu).unwrap();
        let (k, rep) = solve_semicircle(&mu, &cls, 0.5, &SolverConfig::default()).unwrap();
        let lambda0 = (1.5 * 3f64.sqrt()).powf(2.0 / 3.0);
        assert!((k.support()[0] - lambda0).abs() < 1e-12);
        assert!((lambda0 - 1.8899).abs() < 1e-4);
        assert!(rep.residual < 1e-12);
    }

    #[test]
    fn two_atoms_upper_half() {
        let mu = DiscreteMeasure::from_pairs(&[(PI / 3.0, 1.0), (2.0 * PI / 3.0, 1.0)]).unwrap();
        let cls = classify(&mu).unwrap();
        let ClassTag::Semicircle { w, .. } = cls.tag else {
            panic!("{cls:?}")
        };
        assert!((w.theta() - FRAC_PI_2).abs() < 1e-12);
        let (k, rep) = solve_semicircle(&mu, &cls, 0.5, &SolverConfig::default()).unwrap();
        assert!(rep.residual <= 1e-6);
        assert!(k.support_at(1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn antipodal_rejected() {
        let mu = DiscreteMeasure::from_pairs(&[(0.0, 1.0), (PI, 1.0)]).unwrap();
        let cls = classify(&mu).unwrap();
        assert_eq!(
            solve_semicircle(&mu, &cls, 0.5, &SolverConfig::default()).unwrap_err(),
            Error::AntipodalPair
        );
    }
}
