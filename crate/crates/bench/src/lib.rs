//! Fixtures shared by the benchmarks.

use std::f64::consts::TAU;

use lpmink::{lp_surface_measure, DiscreteMeasure, Polygon, UnitVector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A polygon with `n` jittered normals and support numbers in `[0.5, 1.5]`.
pub fn random_polygon(n: usize, seed: u64) -> Polygon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normals: Vec<UnitVector2> = (0..n)
        .map(|k| UnitVector2::new(TAU * (k as f64 + rng.random_range(-0.3..0.3)) / n as f64))
        .collect();
    let support: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    Polygon::from_support(&normals, &support).expect("jittered normals give a bounded body")
}

/// `S_{P,p}` of [`random_polygon`].
pub fn random_measure(n: usize, p: f64, seed: u64) -> DiscreteMeasure {
    lp_surface_measure(&random_polygon(n, seed), p).expect("origin is interior")
}
