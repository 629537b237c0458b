use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::csv_table;

const R_MIN: f64 = 1e-6;
const R_MAX: f64 = 0.99;

/// Curvature data of the graph of `g(x) = ‖x‖^q` at one radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub r: f64,
    /// `‖∇g‖ = q r^{q−1}`.
    pub grad: f64,
    /// `a = (1 + ‖∇g‖²)^{1/2}`.
    pub a: f64,
    /// Support function at the outer normal, `a^{−1}(q−1) r^q`.
    pub h: f64,
    /// Gauss curvature `(q−1) q^{n−1} a^{−(n+1)} r^{(q−2)(n−1)}`.
    pub kappa: f64,
    /// Closed-form density `(q−1)^{−p} q^{1−n} a^{n+p}`.
    pub f: f64,
    /// `h^{1−p} / κ`, which must agree with `f`.
    pub f_identity: f64,
}

/// Graph patch near a boundary point at the origin whose L_p curvature
/// density stays bounded and positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGraphProfile {
    pub p: f64,
    pub n: usize,
    pub q: f64,
    /// `q(1−p) − (q−2)(n−1)`, the power of `r` in `h^{1−p}/κ`; zero.
    pub exponent: f64,
    pub rows: Vec<ProfileRow>,
    pub sup_f: f64,
    pub inf_f: f64,
    /// `h` at the smallest sampled radius.
    pub h_at_min_r: f64,
    /// Largest relative gap between `f` and `h^{1−p}/κ`.
    pub identity_error: f64,
}

impl BoundaryGraphProfile {
    /// Evaluates one row at radius `r`.
    pub fn row(&self, r: f64) -> ProfileRow {
        row(self.p, self.n, self.q, r)
    }

    pub fn to_csv(&self) -> String {
        csv_table(
            ["r", "grad", "a", "h", "kappa", "f", "f_identity"],
            self.rows
                .iter()
                .map(|w| [w.r, w.grad, w.a, w.h, w.kappa, w.f, w.f_identity]),
        )
    }
}

fn row(p: f64, n: usize, q: f64, r: f64) -> ProfileRow {
    let nf = n as f64;
    let grad = q * r.powf(q - 1.0);
    let a = grad.hypot(1.0);
    let h = (q - 1.0) * r.powf(q) / a;
    let kappa = (q - 1.0) * q.powf(nf - 1.0) * a.powf(-(nf + 1.0)) * r.powf((q - 2.0) * (nf - 1.0));
    let f = (q - 1.0).powf(-p) * q.powf(1.0 - nf) * a.powf(nf + p);
    ProfileRow {
        r,
        grad,
        a,
        h,
        kappa,
        f,
        f_identity: h.powf(1.0 - p) / kappa,
    }
}

/// Samples the patch at `samples` radii log-spaced in `[1e-6, 0.99]`, for
/// `n ≥ 2` and `p ∈ (2−n, 1)`, where `q = 2(n−1)/(n+p−2) > 2`.
pub fn oboundary_profile(p: f64, n: usize, samples: usize) -> Result<BoundaryGraphProfile> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n = {n} must be at least 2")));
    }
    if samples < 8 {
        return Err(Error::InvalidInput(format!(
            "samples = {samples} must be at least 8"
        )));
    }
    let nf = n as f64;
    if !(p > 2.0 - nf && p < 1.0) {
        return Err(Error::InvalidP(format!(
            "p = {p} must lie in ({}, 1)",
            2.0 - nf
        )));
    }
    let q = 2.0 * (nf - 1.0) / (nf + p - 2.0);
    if !(q > 2.0) {
        return Err(Error::InvalidP(format!("q = {q} must exceed 2")));
    }
    let (lo, hi) = (R_MIN.ln(), R_MAX.ln());
    let rows: Vec<ProfileRow> = (0..samples)
        .map(|k| {
            let r = match k {
                0 => R_MIN,
                k if k + 1 == samples => R_MAX,
                k => (lo + (hi - lo) * k as f64 / (samples - 1) as f64).exp(),
            };
            row(p, n, q, r)
        })
        .collect();
    let sup_f = rows.iter().map(|w| w.f).fold(f64::NEG_INFINITY, f64::max);
    let inf_f = rows.iter().map(|w| w.f).fold(f64::INFINITY, f64::min);
    let identity_error = rows
        .iter()
        .map(|w| (w.f - w.f_identity).abs() / w.f)
        .fold(0.0, f64::max);
    Ok(BoundaryGraphProfile {
        p,
        n,
        q,
        exponent: q * (1.0 - p) - (q - 2.0) * (nf - 1.0),
        h_at_min_r: rows[0].h,
        rows,
        sup_f,
        inf_f,
        identity_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_half() {
        let prof = oboundary_profile(0.5, 2, 64).unwrap();
        assert_eq!(prof.q, 4.0);
        assert!(prof.exponent.abs() <= 1e-12);
        assert!(prof.identity_error <= 1e-12, "{}", prof.identity_error);
        let f0 = 1.0 / (4.0 * 3f64.sqrt());
        assert!((prof.rows[0].f - f0).abs() < 1e-12);
        assert!((f0 - 0.1443).abs() < 1e-4);
        assert!(prof.h_at_min_r < 1e-20);
        // f increases with a, so the extremes sit at the ends
        let ratio = prof.sup_f / prof.inf_f;
        let want = (prof.rows.last().unwrap().a / prof.rows[0].a).powf(2.5);
        assert!((ratio / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn space_allows_negative_p() {
        let prof = oboundary_profile(-0.5, 3, 16).unwrap();
        assert!(prof.q > 2.0 && prof.inf_f > 0.0);
        assert!(matches!(
            oboundary_profile(-1.0, 3, 16),
            Err(Error::InvalidP(_))
        ));
        assert!(matches!(
            oboundary_profile(0.0, 2, 16),
            Err(Error::InvalidP(_))
        ));
        assert!(oboundary_profile(0.5, 2, 7).is_err());
    }

    #[test]
    fn csv_shape() {
        let csv = oboundary_profile(0.5, 3, 8).unwrap().to_csv();
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.starts_with("r,grad,a,h,kappa,f,f_identity\n"));
    }
}
