//! Closed-form edge lengths on a fixed normal set and the banded solver for
//! their cyclic-tridiagonal Jacobians.

use nalgebra::Vector2;

/// A fixed, sorted normal set whose consecutive gaps are all below π.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    pub u: Vec<Vector2<f64>>,
    /// `cot` and `csc` of the gap from normal `i` to normal `i + 1`.
    cot: Vec<f64>,
    csc: Vec<f64>,
}

impl Frame {
    pub fn new(angles: &[f64]) -> Frame {
        let n = angles.len();
        let u = angles
            .iter()
            .map(|t| Vector2::new(t.cos(), t.sin()))
            .collect::<Vec<_>>();
        let mut cot = Vec::with_capacity(n);
        let mut csc = Vec::with_capacity(n);
        for i in 0..n {
            let a = &u[i];
            let b = &u[(i + 1) % n];
            let (c, s) = (a.dot(b), a.perp(b));
            cot.push(c / s);
            csc.push(1.0 / s);
        }
        Frame { u, cot, csc }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    /// Edge lengths assuming every constraint is active.
    pub fn lengths(&self, h: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let im = (i + n - 1) % n;
                let ip = (i + 1) % n;
                h[im] * self.csc[im] + h[ip] * self.csc[i] - h[i] * (self.cot[im] + self.cot[i])
            })
            .collect()
    }

    /// Row `i` of `∂ℓ/∂h`: coefficients of `h_{i−1}`, `h_i`, `h_{i+1}`.
    pub fn d_length(&self, i: usize) -> (f64, f64, f64) {
        let n = self.len();
        let im = (i + n - 1) % n;
        (self.csc[im], -(self.cot[im] + self.cot[i]), self.csc[i])
    }

    /// Support numbers of `K − ξ`.
    pub fn translate(&self, h: &[f64], xi: &Vector2<f64>) -> Vec<f64> {
        h.iter().zip(&self.u).map(|(h, u)| h - u.dot(xi)).collect()
    }
}

/// Solves `A x = b` for a cyclic tridiagonal `A` given row-wise as
/// `(sub, diag, sup)` (coefficients of `x_{i−1}`, `x_i`, `x_{i+1}`).
///
/// Interleaving the indices as `0, n−1, 1, n−2, …` puts every cyclic
/// neighbour within distance two, so the permuted matrix is pentadiagonal and
/// is factored by banded Gaussian elimination with partial pivoting.
pub(crate) fn solve_cyclic_tridiagonal(rows: &[(f64, f64, f64)], b: &[f64]) -> Option<Vec<f64>> {
    let n = rows.len();
    if n < 3 {
        return None;
    }
    let order: Vec<usize> = (0..n)
        .map(|k| if k % 2 == 0 { k / 2 } else { n - 1 - k / 2 })
        .collect();
    let mut pos = vec![0; n];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    let mut band = Band::new(n, 2, 2);
    let mut rhs = vec![0.0; n];
    for (k, &i) in order.iter().enumerate() {
        let (s, d, u) = rows[i];
        band.add(k, pos[(i + n - 1) % n], s);
        band.add(k, pos[i], d);
        band.add(k, pos[(i + 1) % n], u);
        rhs[k] = b[i];
    }
    let y = band.solve(rhs)?;
    Some((0..n).map(|i| y[pos[i]]).collect())
}

/// Banded matrix with room for the fill-in of partial pivoting.
struct Band {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl Band {
    fn new(n: usize, kl: usize, ku: usize) -> Band {
        let width = 2 * kl + ku + 1;
        Band {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    fn idx(&self, r: usize, c: usize) -> usize {
        debug_assert!(c + self.kl >= r && c <= r + self.kl + self.ku);
        r * self.width + (c + self.kl - r)
    }

    fn get(&self, r: usize, c: usize) -> f64 {
        self.data[self.idx(r, c)]
    }

    fn add(&mut self, r: usize, c: usize, v: f64) {
        let i = self.idx(r, c);
        self.data[i] += v;
    }

    fn set(&mut self, r: usize, c: usize, v: f64) {
        let i = self.idx(r, c);
        self.data[i] = v;
    }

    fn solve(mut self, mut b: Vec<f64>) -> Option<Vec<f64>> {
        let n = self.n;
        let reach = self.kl + self.ku;
        let scale = self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return None;
        }
        for k in 0..n {
            let last_row = (k + self.kl).min(n - 1);
            let last_col = (k + reach).min(n - 1);
            let piv = (k..=last_row)
                .max_by(|&a, &b| self.get(a, k).abs().total_cmp(&self.get(b, k).abs()))
                .unwrap();
            if self.get(piv, k).abs() <= 1e-300 + scale * f64::EPSILON * 1e-3 {
                return None;
            }
            if piv != k {
                for c in k..=last_col {
                    let (x, y) = (self.get(k, c), self.get(piv, c));
                    self.set(k, c, y);
                    self.set(piv, c, x);
                }
                b.swap(k, piv);
            }
            let d = self.get(k, k);
            for r in k + 1..=last_row {
                let f = self.get(r, k) / d;
                if f == 0.0 {
                    continue;
                }
                self.set(r, k, 0.0);
                for c in k + 1..=last_col {
                    let v = self.get(k, c);
                    self.add(r, c, -f * v);
                }
                b[r] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let last_col = (k + reach).min(n - 1);
            let s: f64 = (k + 1..=last_col).map(|c| self.get(k, c) * x[c]).sum();
            x[k] = (b[k] - s) / self.get(k, k);
        }
        x.iter().all(|v| v.is_finite()).then_some(x)
    }
}
