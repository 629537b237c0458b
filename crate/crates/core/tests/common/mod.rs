#![allow(dead_code)]

use std::f64::consts::TAU;

use lpmink::{lp_surface_measure, DiscreteMeasure, Polygon, UnitVector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normals(theta: &[f64]) -> Vec<UnitVector2> {
    theta.iter().map(|&t| UnitVector2::new(t)).collect()
}

pub fn polygon(theta: &[f64], h: &[f64]) -> Polygon {
    Polygon::from_support(&normals(theta), h).unwrap()
}

/// `n` jittered normals with support numbers in `[lo, hi]`; origin interior.
pub fn random_polygon(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Polygon {
    loop {
        let offset = rng.random_range(0.0..TAU);
        let theta: Vec<f64> = (0..n)
            .map(|k| offset + TAU * (k as f64 + rng.random_range(-0.35..0.35)) / n as f64)
            .collect();
        let h: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
        if let Ok(p) = Polygon::from_support(&normals(&theta), &h) {
            if p.area() > 1e-3 {
                return p;
            }
        }
    }
}

/// Like [`random_polygon`] but with every normal carrying an edge of at
/// least `min_edge`.
pub fn random_full_polygon(rng: &mut impl Rng, n: usize, min_edge: f64) -> Polygon {
    // keep the spread below the sagitta of the gaps so edges rarely vanish
    let spread = 0.2 * (TAU / n as f64).powi(2).min(1.0);
    loop {
        let p = random_polygon(rng, n, 1.0 - spread, 1.0 + spread);
        if p.edge_lengths().iter().all(|&l| l >= min_edge) {
            return p;
        }
    }
}

pub fn measure_of(poly: &Polygon, p: f64) -> DiscreteMeasure {
    lp_surface_measure(poly, p).unwrap()
}

/// Atoms at jittered directions in general position with masses in `[0.2, 5]`.
pub fn random_general_measure(rng: &mut impl Rng, n: usize) -> DiscreteMeasure {
    let n = n.max(3);
    let offset = rng.random_range(0.0..TAU);
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            (
                offset + TAU * (k as f64 + rng.random_range(-0.2..0.2)) / n as f64,
                rng.random_range(0.2..5.0),
            )
        })
        .collect();
    DiscreteMeasure::from_pairs(&pairs).unwrap()
}

/// Geodesic distance on the unit circle.
pub fn arc(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}
