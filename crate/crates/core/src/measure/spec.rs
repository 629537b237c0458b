use std::f64::consts::TAU;

use super::discrete::{merge_atoms, Atom, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::geometry::{canonical_angle, Isometry2, SymmetryGroup};

/// A nonnegative, 2π-periodic, piecewise-linear density (per unit arc length)
/// given by samples `(theta_k, f_k)`. A single sample is a constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Density {
    theta: Vec<f64>,
    f: Vec<f64>,
    /// `∫_{theta[0]}^{theta[k]} f`.
    cum: Vec<f64>,
    total: f64,
}

impl Density {
    pub fn new(theta: &[f64], f: &[f64]) -> Result<Density> {
        if theta.is_empty() || theta.len() != f.len() {
            return Err(Error::InvalidInput(format!(
                "density: need matching nonempty theta/f arrays (got {} and {})",
                theta.len(),
                f.len()
            )));
        }
        for (k, (&t, &v)) in theta.iter().zip(f).enumerate() {
            if !t.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "density.theta[{k}] is not finite"
                )));
            }
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "density.f[{k}] must be finite and >= 0, got {v}"
                )));
            }
        }
        let mut pairs: Vec<(f64, f64)> = theta
            .iter()
            .zip(f)
            .map(|(&t, &v)| (canonical_angle(t), v))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pairs.windows(2) {
            if w[1].0 - w[0].0 <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "density.theta has a repeated sample at {}",
                    w[0].0
                )));
            }
        }
        let (theta, f): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let n = theta.len();
        let mut cum = vec![0.0; n];
        for k in 1..n {
            cum[k] = cum[k - 1] + 0.5 * (theta[k] - theta[k - 1]) * (f[k - 1] + f[k]);
        }
        let wrap = theta[0] + TAU - theta[n - 1];
        let total = cum[n - 1] + 0.5 * wrap * (f[n - 1] + f[0]);
        Ok(Density {
            theta,
            f,
            cum,
            total,
        })
    }

    /// Samples a function on a uniform grid of `n` points.
    pub fn from_fn(n: usize, g: impl Fn(f64) -> f64) -> Result<Density> {
        let theta: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
        let f: Vec<f64> = theta.iter().map(|&t| g(t)).collect();
        Density::new(&theta, &f)
    }

    pub fn constant(value: f64) -> Result<Density> {
        Density::new(&[0.0], &[value])
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.theta, &self.f)
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// Segment containing `x ∈ [theta[0], theta[0] + 2π)`: index and endpoints.
    fn segment(&self, x: f64) -> (usize, f64, f64) {
        let n = self.theta.len();
        let k = self.theta.partition_point(|&t| t <= x).saturating_sub(1);
        let end = if k + 1 < n {
            self.theta[k + 1]
        } else {
            self.theta[0] + TAU
        };
        (k, self.theta[k], end)
    }

    fn lift(&self, t: f64) -> f64 {
        self.theta[0] + canonical_angle(t - self.theta[0])
    }

    pub fn eval(&self, t: f64) -> f64 {
        let x = self.lift(t);
        let (k, a, b) = self.segment(x);
        let n = self.f.len();
        let (fa, fb) = (self.f[k], self.f[(k + 1) % n]);
        if b <= a {
            return fa;
        }
        fa + (fb - fa) * (x - a) / (b - a)
    }

    /// Antiderivative on the real line, `∫_{theta[0]}^{x} f`.
    fn primitive(&self, x: f64) -> f64 {
        let laps = ((x - self.theta[0]) / TAU).floor();
        let y = self.lift(x);
        let (k, a, _) = self.segment(y);
        laps * self.total + self.cum[k] + 0.5 * (y - a) * (self.f[k] + self.eval(y))
    }

    /// `∫_a^b f` for real `a ≤ b` (arcs may wrap any number of times).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.primitive(b) - self.primitive(a)
    }

    /// Closed arcs `(start, width)` on which the density is not identically zero.
    pub fn support_arcs(&self) -> Vec<(f64, f64)> {
        let n = self.theta.len();
        if n == 1 {
            return if self.f[0] > 0.0 {
                vec![(0.0, TAU)]
            } else {
                vec![]
            };
        }
        (0..n)
            .filter(|&k| self.f[k] > 0.0 || self.f[(k + 1) % n] > 0.0)
            .map(|k| {
                let end = if k + 1 < n {
                    self.theta[k + 1]
                } else {
                    self.theta[0] + TAU
                };
                (self.theta[k], end - self.theta[k])
            })
            .collect()
    }

    pub fn pushforward(&self, a: Isometry2) -> Density {
        let theta: Vec<f64> = self.theta.iter().map(|&t| a.apply_angle(t)).collect();
        Density::new(&theta, &self.f).expect("isometric image of a valid density")
    }

    pub fn scaled(&self, s: f64) -> Density {
        let f: Vec<f64> = self.f.iter().map(|v| v * s).collect();
        Density::new(&self.theta, &f).expect("scaled density")
    }

    /// Pointwise sum, sampled on the union of both knot sets.
    pub fn sum(&self, other: &Density) -> Density {
        let mut knots: Vec<f64> = self.theta.iter().chain(&other.theta).copied().collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
        let f: Vec<f64> = knots
            .iter()
            .map(|&t| self.eval(t) + other.eval(t))
            .collect();
        Density::new(&knots, &f).expect("sum of valid densities")
    }

    /// Whether `f ∘ A = f` at every knot of either function, to relative `tol`.
    pub fn is_invariant_under(&self, a: Isometry2, tol: f64) -> bool {
        let scale = self
            .f
            .iter()
            .cloned()
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let inv = a.inverse();
        self.theta.iter().all(|&t| {
            (self.eval(a.apply_angle(t)) - self.eval(t)).abs() <= tol * scale
                && (self.eval(inv.apply_angle(t)) - self.eval(t)).abs() <= tol * scale
        })
    }
}

/// A general finite measure on S¹: atoms plus an optional piecewise-linear
/// density.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpec {
    atoms: Vec<Atom>,
    density: Option<Density>,
}

impl MeasureSpec {
    pub fn new(atoms: Vec<Atom>, density: Option<Density>) -> Result<MeasureSpec> {
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
        let spec = MeasureSpec {
            atoms: merge_atoms(atoms),
            density,
        };
        if !(spec.total_mass() > 0.0) {
            return Err(Error::EmptyMeasure);
        }
        Ok(spec)
    }

    pub fn atomic(mu: &DiscreteMeasure) -> MeasureSpec {
        MeasureSpec {
            atoms: mu.atoms().to_vec(),
            density: None,
        }
    }

    pub fn from_density(d: Density) -> Result<MeasureSpec> {
        MeasureSpec::new(vec![], Some(d))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&Density> {
        self.density.as_ref()
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn density_mass(&self) -> f64 {
        self.density.as_ref().map_or(0.0, |d| d.total_mass())
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_mass() + self.density_mass()
    }

    /// The atomic part as a [`DiscreteMeasure`] when there is no density.
    pub fn as_discrete(&self) -> Option<DiscreteMeasure> {
        if self.density.is_some() {
            return None;
        }
        DiscreteMeasure::new(self.atoms.iter().copied()).ok()
    }

    /// Mass of the half-open arc `(a, b]`, `a < b ≤ a + 2π`.
    pub fn arc_mass(&self, a: f64, b: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|x| {
                let d = crate::geometry::ccw_gap(a, x.theta);
                d > 0.0 && d <= b - a
            })
            .map(|x| x.mass)
            .sum();
        atoms + self.density.as_ref().map_or(0.0, |d| d.integral(a, b))
    }

    pub fn pushforward(&self, a: Isometry2) -> MeasureSpec {
        MeasureSpec {
            atoms: merge_atoms(
                self.atoms
                    .iter()
                    .map(|x| Atom::new(a.apply_angle(x.theta), x.mass)),
            ),
            density: self.density.as_ref().map(|d| d.pushforward(a)),
        }
    }

    pub fn sum(&self, other: &MeasureSpec) -> MeasureSpec {
        let density = match (&self.density, &other.density) {
            (Some(a), Some(b)) => Some(a.sum(b)),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        MeasureSpec {
            atoms: merge_atoms(self.atoms.iter().chain(&other.atoms).copied()),
            density,
        }
    }

    /// Whether the measure is invariant under every element of `g`.
    pub fn is_invariant(&self, g: &SymmetryGroup, tol: f64) -> bool {
        let atomic = DiscreteMeasure::new(self.atoms.iter().copied()).ok();
        g.elements().into_iter().all(|a| {
            atomic.as_ref().is_none_or(|m| m.is_invariant_under(a, tol))
                && self
                    .density
                    .as_ref()
                    .is_none_or(|d| d.is_invariant_under(a, tol))
        })
    }
}
