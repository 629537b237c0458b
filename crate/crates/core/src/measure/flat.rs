//! Bounded-Lipschitz (flat) distance between atomic measures on S¹.
//!
//! `d(μ, ν) = sup { ∫ g d(μ − ν) : |g| ≤ 1, g 1-Lipschitz for arc length }`.
//! Only the values `g_k` at the atoms matter, and since arc length is a path
//! metric the Lipschitz condition reduces to consecutive pairs. With `g_0`
//! fixed the remaining problem is a chain, solved by dynamic programming on
//! concave piecewise-linear value functions; the outer maximization over
//! `g_0` is a concave one-dimensional problem.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use ordered_float::OrderedFloat;

use super::discrete::DiscreteMeasure;

/// Concave piecewise-linear function on `[lo, hi]`, stored as its value at
/// `lo` and a multiset of (slope, length) segments ordered by slope.
/// Slopes are stored relative to a lazy offset `shift`.
struct ConcavePl {
    lo: f64,
    hi: f64,
    value_lo: f64,
    shift: f64,
    segs: BTreeMap<OrderedFloat<f64>, f64>,
}

impl ConcavePl {
    fn point(x: f64, value: f64) -> Self {
        ConcavePl {
            lo: x,
            hi: x,
            value_lo: value,
            shift: 0.0,
            segs: BTreeMap::new(),
        }
    }

    /// `x ↦ max_{|y − x| ≤ r} f(y)`: inserts a flat piece of length `2r`.
    fn window(&mut self, r: f64) {
        if r <= 0.0 {
            return;
        }
        // slopes above zero keep their place on the left, so value_lo is unchanged
        *self.segs.entry(OrderedFloat(-self.shift)).or_insert(0.0) += 2.0 * r;
        self.lo -= r;
        self.hi += r;
    }

    /// `x ↦ f(x) + s·x`.
    fn add_linear(&mut self, s: f64) {
        self.shift += s;
        self.value_lo += s * self.lo;
    }

    /// Restricts the domain to `[a, b]`; the domain must meet `[a, b]`.
    fn clip(&mut self, a: f64, b: f64) {
        if self.lo < a {
            let mut need = a - self.lo;
            // the leftmost pieces have the largest slopes
            while need > 0.0 {
                let Some(mut e) = self.segs.last_entry() else {
                    break;
                };
                let slope = e.key().0 + self.shift;
                let take = e.get().min(need);
                self.value_lo += slope * take;
                need -= take;
                *e.get_mut() -= take;
                if *e.get() <= 0.0 {
                    e.remove();
                }
            }
            self.lo = a;
        }
        if self.hi > b {
            let mut need = self.hi - b;
            while need > 0.0 {
                let Some(mut e) = self.segs.first_entry() else {
                    break;
                };
                let take = e.get().min(need);
                need -= take;
                *e.get_mut() -= take;
                if *e.get() <= 0.0 {
                    e.remove();
                }
            }
            self.hi = b;
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let mut v = self.value_lo;
        let mut pos = self.lo;
        for (k, len) in self.segs.iter().rev() {
            if pos >= x {
                break;
            }
            let take = len.min(x - pos);
            v += (k.0 + self.shift) * take;
            pos += take;
        }
        v
    }
}

/// Sup of `Σ σ_k g_k` over `|g| ≤ 1` with `|g_{k+1} − g_k| ≤ gap_k`
/// (cyclically), given `g_0 = x`.
fn chain_value(sigma: &[f64], gaps: &[f64], x: f64) -> f64 {
    let k = sigma.len();
    let mut f = ConcavePl::point(x, sigma[0] * x);
    for j in 1..k {
        f.window(gaps[j - 1]);
        f.add_linear(sigma[j]);
        f.clip(-1.0, 1.0);
    }
    f.window(gaps[k - 1]);
    f.eval(x)
}

/// Flat norm of a signed atomic measure given as `(angle, weight)` pairs with
/// sorted, distinct angles in `[0, 2π)`.
pub(crate) fn flat_norm(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.1 != 0.0).collect();
    match pts.len() {
        0 => return 0.0,
        1 => return pts[0].1.abs(),
        _ => {}
    }
    let k = pts.len();
    let sigma: Vec<f64> = pts.iter().map(|p| p.1).collect();
    // a gap of 2 or more never binds given |g| ≤ 1
    let gaps: Vec<f64> = (0..k)
        .map(|j| {
            let g = if j + 1 < k {
                pts[j + 1].0 - pts[j].0
            } else {
                pts[0].0 + TAU - pts[j].0
            };
            g.min(2.0)
        })
        .collect();

    let w = |x: f64| chain_value(&sigma, &gaps, x);
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (-1.0_f64, 1.0_f64);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (w(c), w(d));
    let mut best = w(-1.0).max(w(1.0)).max(w(0.0)).max(fc).max(fd);
    for _ in 0..90 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = w(c);
            best = best.max(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = w(d);
            best = best.max(fd);
        }
    }
    best.max(0.0)
}

/// Signed difference `μ − ν` as sorted `(angle, weight)` pairs; atoms of the
/// two measures closer than `tol` are identified.
pub(crate) fn signed_difference(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    tol: f64,
) -> Vec<(f64, f64)> {
    let mut all: Vec<(f64, f64)> = mu
        .atoms()
        .iter()
        .map(|a| (a.theta, a.mass))
        .chain(nu.atoms().iter().map(|a| (a.theta, -a.mass)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(all.len());
    for (t, w) in all {
        match out.last_mut() {
            Some(last) if t - last.0 <= tol => last.1 += w,
            _ => out.push((t, w)),
        }
    }
    if out.len() > 1 && out[0].0 + TAU - out[out.len() - 1].0 <= tol {
        let (_, w) = out.pop().unwrap();
        out[0].1 += w;
    }
    out
}

/// Bounded-Lipschitz distance between two atomic measures.
pub fn weak_distance(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
    flat_norm(&signed_difference(mu, nu, 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dm(p: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::from_pairs(p).unwrap()
    }

    #[test]
    fn identical_is_zero() {
        let m = dm(&[(0.0, 1.0), (2.0, 3.0)]);
        assert_eq!(weak_distance(&m, &m), 0.0);
    }

    #[test]
    fn moved_atom() {
        for eps in [1e-6, 0.1, 1.0, 1.9] {
            let d = weak_distance(&dm(&[(0.0, 1.0)]), &dm(&[(eps, 1.0)]));
            assert!((d - eps).abs() < 1e-12, "eps = {eps}: {d}");
        }
        // moving farther than 2 costs destruction plus creation
        let d = weak_distance(&dm(&[(0.0, 1.0)]), &dm(&[(3.0, 1.0)]));
        assert!((d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mass_difference() {
        let d = weak_distance(&dm(&[(0.5, 1.0)]), &dm(&[(0.5, 2.0)]));
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wraps_around() {
        let d = weak_distance(&dm(&[(0.05, 1.0)]), &dm(&[(TAU - 0.05, 1.0)]));
        assert!((d - 0.1).abs() < 1e-12);
    }
}
