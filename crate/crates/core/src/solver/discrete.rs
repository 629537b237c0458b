use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::inner::maximize;
use super::kernel::{solve_cyclic_tridiagonal, Frame};
use super::orbits::{orbits, OrbitStructure};
use crate::error::{check_p_open, Error, Result};
use crate::geometry::{Polygon, SymmetryGroup, UnitVector2};
use crate::measure::{classify, lp_surface_measure, DiscreteMeasure, MeasureClass};

/// One level of the refinement loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopEntry {
    pub m: usize,
    pub residual: f64,
    pub diameter: f64,
    /// Flat distance between `S_{P_m,p}` and `S_{P_{m/2},p}`, relative to `μ(S¹)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak_change: Option<f64>,
    /// `support_distance(P_m, P_{m/2})` relative to the diameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body_change: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub residual: f64,
    pub outer_iters: usize,
    pub newton_iters: usize,
    pub classification: String,
    /// Proportionality constant `c` in `S_{P,p} ≈ c μ` when the descent phase
    /// handed over (before rescaling).
    pub c: f64,
    pub symmetry: String,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_final: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub loop_history: Vec<LoopEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monge_ampere_residual: Option<f64>,
}

impl SolveReport {
    pub(crate) fn new(class: &MeasureClass, g: &SymmetryGroup) -> Self {
        SolveReport {
            residual: f64::NAN,
            outer_iters: 0,
            newton_iters: 0,
            classification: class.name().to_string(),
            c: 1.0,
            symmetry: g.to_string(),
            warnings: Vec::new(),
            m_final: None,
            loop_history: Vec::new(),
            monge_ampere_residual: None,
        }
    }
}

/// `max_i |S_{P,p}({u_i}) − α_i| / max(α_i, ε)`, combined by maximum with the
/// mass of `S_{P,p}` away from the atoms of `mu`, relative to `μ(S¹)`.
pub fn residual(poly: &Polygon, mu: &DiscreteMeasure, p: f64) -> f64 {
    let s = match lp_surface_measure(poly, p) {
        Ok(s) => s,
        Err(crate::Error::EmptyMeasure) => return 1.0,
        Err(_) => return f64::INFINITY,
    };
    let eps = 1e-300;
    let mut worst: f64 = 0.0;
    for a in mu.atoms() {
        let got = s.mass_at(a.theta, 1e-9);
        worst = worst.max((got - a.mass).abs() / a.mass.max(eps));
    }
    let off: f64 = s
        .atoms()
        .iter()
        .filter(|a| mu.index_of(a.theta, 1e-9).is_none())
        .map(|a| a.mass)
        .sum();
    worst.max(off / mu.total_mass())
}

/// Solves `S_{P,p} = μ` for a discrete measure in general position, with the
/// solution invariant under `g`.
pub fn solve_discrete(
    mu: &DiscreteMeasure,
    p: f64,
    g: &SymmetryGroup,
    cfg: &SolverConfig,
) -> Result<(Polygon, SolveReport)> {
    solve_discrete_from(mu, p, g, cfg, None)
}

/// Like [`solve_discrete`], starting from the support numbers `warm`
/// (aligned with the atoms of `mu`) when given.
pub fn solve_discrete_from(
    mu: &DiscreteMeasure,
    p: f64,
    g: &SymmetryGroup,
    cfg: &SolverConfig,
    warm: Option<&[f64]>,
) -> Result<(Polygon, SolveReport)> {
    check_p_open(p)?;
    cfg.validate()?;
    let class = classify(mu)?;
    if !class.is_general_position() {
        return Err(Error::Concentrated);
    }
    let angles = mu.angles();
    let n = angles.len();
    let normals: Vec<UnitVector2> = angles.iter().map(|&t| UnitVector2::new(t)).collect();
    let orb = orbits(&normals, g).map_err(|_| Error::NotSymmetric {
        group: g.to_string(),
    })?;
    let masses = mu.masses();
    if orb.max_spread(&masses) > 1e-9 {
        return Err(Error::NotSymmetric {
            group: g.to_string(),
        });
    }
    let mean = masses.iter().sum::<f64>() / n as f64;
    let alpha: Vec<f64> = masses.iter().map(|m| m / mean).collect();
    let frame = Frame::new(&angles);
    let mut report = SolveReport::new(&class, g);

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for start in 0..cfg.multi_start {
        let mut h0: Vec<f64> = match warm {
            Some(w) if w.len() == n && w.iter().all(|v| v.is_finite() && *v > 0.0) => w.to_vec(),
            _ => vec![1.0; n],
        };
        if start > 0 {
            for v in h0.iter_mut() {
                *v *= 1.0 + 0.25 * rng.random_range(-1.0..1.0);
            }
        }
        orb.average(&mut h0);
        let run = Run {
            normals: &normals,
            frame: &frame,
            alpha: &alpha,
            p,
            orb: &orb,
            cfg,
        };
        match run.solve(h0, &mut report) {
            Ok((h, r)) => {
                if best.as_ref().is_none_or(|b| r < b.1) {
                    best = Some((h, r));
                }
                if r <= cfg.tol_residual {
                    break;
                }
            }
            Err(e) => report.warnings.push(format!("start {start}: {e}")),
        }
    }
    if best
        .as_ref()
        .is_none_or(|b| !(b.1 <= cfg.tol_residual * 1e-2))
    {
        let run = Run {
            normals: &normals,
            frame: &frame,
            alpha: &alpha,
            p,
            orb: &orb,
            cfg,
        };
        match run.continuation(&mut report) {
            Ok((h, r)) => {
                if best.as_ref().is_none_or(|b| r < b.1) {
                    report
                        .warnings
                        .push("solved by continuation in the masses".into());
                    best = Some((h, r));
                }
            }
            Err(e) => report.warnings.push(format!("continuation: {e}")),
        }
    }
    let Some((h, _)) = best else {
        return Err(Error::NoConvergence {
            best_residual: f64::INFINITY,
        });
    };
    let lambda = mean.powf(1.0 / (2.0 - p));
    let hs: Vec<f64> = h.iter().map(|v| v * lambda).collect();
    let poly = Polygon::from_support(&normals, &hs)?;
    report.residual = residual(&poly, mu, p);
    if !(report.residual <= cfg.tol_residual) {
        return Err(Error::NoConvergence {
            best_residual: report.residual,
        });
    }
    Ok((poly, report))
}

struct Run<'a> {
    normals: &'a [UnitVector2],
    frame: &'a Frame,
    alpha: &'a [f64],
    p: f64,
    orb: &'a OrbitStructure,
    cfg: &'a SolverConfig,
}

/// Outcome of evaluating a candidate support vector.
struct State {
    h: Vec<f64>,
    l: Vec<f64>,
    phi: f64,
}

impl Run<'_> {
    fn n(&self) -> usize {
        self.alpha.len()
    }

    /// All edges present with length above the floor.
    fn edges_ok(&self, l: &[f64]) -> bool {
        let per: f64 = l.iter().map(|v| v.abs()).sum();
        l.iter().all(|&v| v > self.cfg.eps_edge * per)
    }

    /// Replaces `h` by the support function of the polygon it defines (so
    /// redundant constraints become tight with a zero-length edge), normalizes
    /// to unit area, moves the origin to `ξ(P)`, and evaluates `Φ`.
    fn settle(&self, h: Vec<f64>) -> Option<State> {
        let poly = Polygon::from_support(self.normals, &h).ok()?;
        let v = poly.area();
        if !(v > 0.0) {
            return None;
        }
        let s = v.sqrt();
        let h: Vec<f64> = poly.tight_support().iter().map(|x| x / s).collect();
        let l: Vec<f64> = poly.edge_lengths().iter().map(|x| x / s).collect();
        let verts = poly.vertices();
        let start = verts.iter().fold(Vector2::zeros(), |a, v| a + v) / (s * verts.len() as f64);
        let (xi, _) = maximize(&self.frame.u, &h, self.alpha, self.p, start, self.cfg).ok()?;
        let mut h = self.frame.translate(&h, &xi);
        self.orb.average(&mut h);
        if h.iter().any(|&x| x <= 0.0) {
            return None;
        }
        let phi = h
            .iter()
            .zip(self.alpha)
            .map(|(h, a)| a * h.powf(self.p))
            .sum();
        Some(State { h, l, phi })
    }

    fn masses(&self, h: &[f64], l: &[f64]) -> Vec<f64> {
        h.iter()
            .zip(l)
            .map(|(h, l)| h.powf(1.0 - self.p) * l)
            .collect()
    }

    /// `max_i |S_i / (c α_i) − 1|` with `c` fitted by total mass.
    fn proportionality_defect(&self, h: &[f64], l: &[f64]) -> (f64, f64) {
        let s = self.masses(h, l);
        let c = s.iter().sum::<f64>() / self.alpha.iter().sum::<f64>();
        let d = s
            .iter()
            .zip(self.alpha)
            .map(|(s, a)| (s / (c * a) - 1.0).abs())
            .fold(0.0, f64::max);
        (d, c)
    }

    fn solve(&self, h0: Vec<f64>, report: &mut SolveReport) -> Result<(Vec<f64>, f64)> {
        let mut state = match self.settle(h0) {
            Some(s) => s,
            None => self
                .settle(vec![1.0; self.n()])
                .ok_or(Error::NoConvergence {
                    best_residual: f64::INFINITY,
                })?,
        };
        let target = self.cfg.tol_residual * 1e-2;
        let mut switch = self.cfg.newton_switch;
        let mut eta = self.cfg.initial_step;
        let mut best: Option<(Vec<f64>, f64)> = None;
        // Newton is also tried at growing intervals, not only once the
        // defect is small: far from proportionality it often still converges
        let mut gap = 50;
        let mut next_try = 0;
        let mut it = 0;
        loop {
            let (defect, c) = self.proportionality_defect(&state.h, &state.l);
            let done = it >= self.cfg.max_outer_iters;
            if (defect < switch || it >= next_try || done) && state.l.iter().all(|&l| l > 0.0) {
                report.c = c;
                match self.newton(&state.h, report) {
                    Ok((h, r)) => {
                        if best.as_ref().is_none_or(|b| r < b.1) {
                            best = Some((h, r));
                        }
                        if r <= target {
                            break;
                        }
                    }
                    Err(e) => log::debug!("newton polish failed: {e}"),
                }
                next_try = it + gap;
                gap *= 2;
                if defect < switch {
                    switch *= 0.1;
                }
            }
            if done {
                break;
            }
            it += 1;
            report.outer_iters += 1;
            match self.descent_step(&state, eta) {
                Some(next) => {
                    state = next;
                    eta = (eta * 1.5).min(self.cfg.initial_step);
                }
                None => {
                    eta *= self.cfg.backtrack;
                    if eta < 1e-14 {
                        // stalled: one last polish from here
                        next_try = it;
                        if best.is_some() {
                            break;
                        }
                        eta = self.cfg.initial_step;
                    }
                }
            }
        }
        best.ok_or(Error::NoConvergence {
            best_residual: f64::INFINITY,
        })
    }

    /// One projected step on the unit-area slice, taken in `y = log h`:
    /// `∂Φ/∂y_i = α_i p h_i^p` (envelope gradient times `h_i`) minus its
    /// component along `∂V/∂y_i = ℓ_i h_i`, then `h_i ← h_i exp(−η ĝ_i)` with
    /// `ĝ` scaled to unit max-norm.
    fn descent_step(&self, st: &State, eta: f64) -> Option<State> {
        let p = self.p;
        let g: Vec<f64> =
            st.h.iter()
                .zip(self.alpha)
                .map(|(h, a)| a * p * h.powf(p))
                .collect();
        let v: Vec<f64> = st.h.iter().zip(&st.l).map(|(h, l)| h * l).collect();
        let gv: f64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let mut gt: Vec<f64> = g.iter().zip(&v).map(|(g, v)| g - gv / vv * v).collect();
        self.orb.average(&mut gt);
        let gmax = gt.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if gmax == 0.0 {
            return None;
        }
        let trial: Vec<f64> =
            st.h.iter()
                .zip(&gt)
                .map(|(h, g)| h * (-eta * g / gmax).exp())
                .collect();
        let next = self.settle(trial)?;
        (next.phi < st.phi).then_some(next)
    }

    /// Newton on `(h_i^{1−p} ℓ_i(h) − α_i) / α_i = 0` after scaling `h` so that
    /// total masses agree. Returns the best iterate and its residual.
    fn newton(&self, h_start: &[f64], report: &mut SolveReport) -> Result<(Vec<f64>, f64)> {
        let n = self.n();
        let l = self.frame.lengths(h_start);
        let s = self.masses(h_start, &l);
        // total-mass fit, refined by the mean log-ratio
        let c0 = s.iter().sum::<f64>() / self.alpha.iter().sum::<f64>();
        let logs: Vec<f64> = s
            .iter()
            .zip(self.alpha)
            .filter(|(s, _)| **s > 0.0)
            .map(|(s, a)| (s / a).ln())
            .collect();
        let c = if logs.len() == n {
            (logs.iter().sum::<f64>() / n as f64).exp()
        } else {
            c0
        };
        let k = c.powf(-1.0 / (2.0 - self.p));
        let h: Vec<f64> = h_start.iter().map(|x| x * k).collect();
        let (h, m) = self.newton_to(h, self.alpha, self.cfg.max_newton_iters, 1e-14, report);
        if !m.is_finite() {
            return Err(Error::NoConvergence { best_residual: m });
        }
        Ok((h, m))
    }

    /// Damped Newton in `log h` for `S(h) = beta`.
    /// Returns the last iterate and its max relative residual.
    fn newton_to(
        &self,
        mut h: Vec<f64>,
        beta: &[f64],
        max_iters: usize,
        tol: f64,
        report: &mut SolveReport,
    ) -> (Vec<f64>, f64) {
        let p = self.p;
        let n = self.n();
        let resid = |h: &[f64], l: &[f64]| -> Vec<f64> {
            h.iter()
                .zip(l)
                .zip(beta)
                .map(|((h, l), a)| (h.powf(1.0 - p) * l - a) / a)
                .collect()
        };
        let norm = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let maxabs = |r: &[f64]| r.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let mut l = self.frame.lengths(&h);
        if !self.edges_ok(&l) {
            return (h, f64::INFINITY);
        }
        let mut r = resid(&h, &l);
        let mut rn = norm(&r);
        for _ in 0..max_iters {
            if maxabs(&r) <= tol {
                break;
            }
            report.newton_iters += 1;
            // Jacobian with respect to log h; its columns are balanced even
            // when the support numbers span many orders of magnitude
            let rows: Vec<(f64, f64, f64)> = (0..n)
                .map(|i| {
                    let (dm, dd, dp) = self.frame.d_length(i);
                    let hp = h[i].powf(1.0 - p);
                    let a = beta[i];
                    (
                        hp * dm * h[(i + n - 1) % n] / a,
                        ((1.0 - p) * hp * l[i] + hp * dd * h[i]) / a,
                        hp * dp * h[(i + 1) % n] / a,
                    )
                })
                .collect();
            let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
            let Some(mut d) = solve_cyclic_tridiagonal(&rows, &rhs) else {
                break;
            };
            self.orb.average(&mut d);
            let mut t = 1.0;
            let mut improved = false;
            for _ in 0..40 {
                let hn: Vec<f64> = h.iter().zip(&d).map(|(h, d)| h * (t * d).exp()).collect();
                if hn.iter().all(|&x| x > 0.0 && x.is_finite()) {
                    let ln = self.frame.lengths(&hn);
                    if self.edges_ok(&ln) {
                        let rnew = resid(&hn, &ln);
                        let nn = norm(&rnew);
                        if nn < (1.0 - 1e-4 * t) * rn {
                            h = hn;
                            l = ln;
                            r = rnew;
                            rn = nn;
                            improved = true;
                            break;
                        }
                    }
                }
                t *= 0.5;
            }
            if !improved {
                break;
            }
        }
        let m = maxabs(&r);
        (h, m)
    }

    /// `log S(e^y) − ls0 − t g` and its cyclic-tridiagonal Jacobian in `y`.
    fn log_system(
        &self,
        y: &[f64],
        t: f64,
        ls0: &[f64],
        g: &[f64],
    ) -> Option<(Vec<f64>, Vec<(f64, f64, f64)>)> {
        let n = self.n();
        let p = self.p;
        let h: Vec<f64> = y.iter().map(|v| v.exp()).collect();
        let l = self.frame.lengths(&h);
        if !self.edges_ok(&l) {
            return None;
        }
        let s = self.masses(&h, &l);
        let f = (0..n).map(|i| s[i].ln() - ls0[i] - t * g[i]).collect();
        let rows = (0..n)
            .map(|i| {
                let (dm, dd, dp) = self.frame.d_length(i);
                let hp = h[i].powf(1.0 - p);
                (
                    hp * dm * h[(i + n - 1) % n] / s[i],
                    1.0 - p + hp * dd * h[i] / s[i],
                    hp * dp * h[(i + 1) % n] / s[i],
                )
            })
            .collect();
        Some((f, rows))
    }

    /// Fallback that never evaluates `ξ(P)`: follows the solution curve of
    /// `log S(h) = (1 − t) log S(h⁰) + t log α` from `h⁰ = 1` at `t = 0` by
    /// pseudo-arclength continuation in `(log h, t)`, which passes folds of
    /// the curve. Usable when the maximizer of `Φ` sits closer to an edge
    /// than floating point resolves.
    fn continuation(&self, report: &mut SolveReport) -> Result<(Vec<f64>, f64)> {
        let n = self.n();
        let fail = |r: f64| Error::NoConvergence { best_residual: r };
        let ones = vec![1.0; n];
        let l = self.frame.lengths(&ones);
        if !self.edges_ok(&l) {
            return Err(fail(f64::INFINITY));
        }
        let ls0: Vec<f64> = self.masses(&ones, &l).iter().map(|v| v.ln()).collect();
        let g: Vec<f64> = self
            .alpha
            .iter()
            .zip(&ls0)
            .map(|(a, s)| a.ln() - s)
            .collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let solve = |rows: &[(f64, f64, f64)], rhs: &[f64]| -> Option<Vec<f64>> {
            let mut x = solve_cyclic_tridiagonal(rows, rhs)?;
            self.orb.average(&mut x);
            Some(x)
        };
        // unit tangent (dy, dt) with the orientation of `prev`
        let tangent =
            |rows: &[(f64, f64, f64)], prev: Option<(&[f64], f64)>| -> Option<(Vec<f64>, f64)> {
                let b = solve(rows, &g)?;
                let norm = (dot(&b, &b) + 1.0).sqrt();
                let mut ty: Vec<f64> = b.iter().map(|v| v / norm).collect();
                let mut tt = 1.0 / norm;
                if let Some((py, pt)) = prev {
                    if dot(&ty, py) + tt * pt < 0.0 {
                        ty.iter_mut().for_each(|v| *v = -*v);
                        tt = -tt;
                    }
                }
                Some((ty, tt))
            };

        let mut y = vec![0.0; n];
        let mut t = 0.0_f64;
        let (_, rows) = self
            .log_system(&y, t, &ls0, &g)
            .ok_or(fail(f64::INFINITY))?;
        let (mut ty, mut tt) = tangent(&rows, None).ok_or(fail(f64::INFINITY))?;
        let mut ds = 0.25;
        for _ in 0..self.cfg.max_outer_iters {
            if ds < 1e-10 {
                break;
            }
            // predictor, then Newton on the plane orthogonal to the tangent
            let mut yn: Vec<f64> = y.iter().zip(&ty).map(|(y, d)| y + ds * d).collect();
            let mut tn = t + ds * tt;
            let mut iters = 0;
            let converged = loop {
                let Some((f, rows)) = self.log_system(&yn, tn, &ls0, &g) else {
                    break false;
                };
                let fmax = f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                if fmax <= 1e-9 {
                    break true;
                }
                if iters == 8 || !fmax.is_finite() {
                    break false;
                }
                iters += 1;
                report.newton_iters += 1;
                let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
                let (Some(a), Some(b)) = (solve(&rows, &rhs), solve(&rows, &g)) else {
                    break false;
                };
                let plane: f64 = yn
                    .iter()
                    .zip(&y)
                    .zip(&ty)
                    .map(|((a, b), d)| (a - b) * d)
                    .sum::<f64>()
                    + (tn - t) * tt
                    - ds;
                let den = dot(&ty, &b) + tt;
                if den.abs() < 1e-300 {
                    break false;
                }
                let dt = (-plane - dot(&ty, &a)) / den;
                for i in 0..n {
                    yn[i] += a[i] + dt * b[i];
                }
                tn += dt;
            };
            if !converged {
                ds *= 0.5;
                continue;
            }
            if tn >= 1.0 {
                // land on t = 1 from the secant between the last two points
                let w = (1.0 - t) / (tn - t);
                let h: Vec<f64> = y
                    .iter()
                    .zip(&yn)
                    .map(|(a, b)| (a + w * (b - a)).exp())
                    .collect();
                let (h, r) =
                    self.newton_to(h, self.alpha, self.cfg.max_newton_iters, 1e-14, report);
                if r <= self.cfg.tol_residual * 1e-2 {
                    return Ok((h, r));
                }
                ds *= 0.5;
                continue;
            }
            if tn < 0.0 {
                break;
            }
            let Some((_, rows)) = self.log_system(&yn, tn, &ls0, &g) else {
                ds *= 0.5;
                continue;
            };
            let Some((nty, ntt)) = tangent(&rows, Some((&ty, tt))) else {
                ds *= 0.5;
                continue;
            };
            y = yn;
            t = tn;
            ty = nty;
            tt = ntt;
            report.outer_iters += 1;
            if iters <= 3 {
                ds = (ds * 1.5).min(4.0);
            }
        }
        Err(fail(f64::INFINITY))
    }
}
