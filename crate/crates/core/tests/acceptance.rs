//! Acceptance suite: runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::{Duration, Instant};

use common::{random_full_polygon, random_general_measure, random_polygon, rng};
use lpmink::{
    classify, hemisphere_delta, highdimno_limit_check, lp_surface_measure, oboundary_profile, phi,
    residual, solve, solve_detailed, solve_discrete, solve_semicircle, support_distance,
    xi_of_polygon, Atom, ClassTag, Density, DiscreteMeasure, Error, MeasureSpec, PipelineConfig,
    Polygon, SolverConfig, SymmetryGroup, UnitVector2,
};
use rand::Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn axis_square(alpha: f64) -> DiscreteMeasure {
    DiscreteMeasure::from_pairs(&[
        (0.0, alpha),
        (FRAC_PI_2, alpha),
        (PI, alpha),
        (1.5 * PI, alpha),
    ])
    .unwrap()
}

fn square() -> Verdict {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for p in [0.1, 0.5, 0.9] {
        let t = Instant::now();
        let Ok((k, _)) = solve_discrete(&axis_square(2.0), p, &SymmetryGroup::Trivial, &cfg) else {
            return verdict(false, format!("p = {p}: solver failed"));
        };
        slowest = slowest.max(t.elapsed());
        worst = k
            .support()
            .iter()
            .map(|h| (h - 1.0).abs())
            .fold(worst, f64::max);
    }
    verdict(
        worst <= 1e-6 && slowest < Duration::from_secs(1),
        format!("max |h - 1| = {worst:.1e}, slowest {slowest:.1?}"),
    )
}

fn triangle() -> Verdict {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    let t0 = Instant::now();
    for p in [0.1, 0.5, 0.9] {
        for alpha in [1.0, 2.0, 5.0] {
            let mu = DiscreteMeasure::from_pairs(&[
                (FRAC_PI_2, alpha),
                (7.0 * PI / 6.0, alpha),
                (11.0 * PI / 6.0, alpha),
            ])
            .unwrap();
            let Ok((k, _)) = solve_discrete(&mu, p, &SymmetryGroup::Trivial, &cfg) else {
                return verdict(false, format!("p = {p}, alpha = {alpha}: solver failed"));
            };
            let r = (alpha / (2.0 * 3f64.sqrt())).powf(1.0 / (2.0 - p));
            worst = k
                .support()
                .iter()
                .map(|h| (h - r).abs())
                .fold(worst, f64::max);
        }
    }
    let elapsed = t0.elapsed();
    verdict(
        worst <= 1e-6 && elapsed < Duration::from_secs(1),
        format!("max |inradius - closed form| = {worst:.1e}, {elapsed:.1?}"),
    )
}

fn single_direction() -> Verdict {
    let w = 0.7;
    let mu = DiscreteMeasure::from_pairs(&[(w, 3.0)]).unwrap();
    let cls = classify(&mu).unwrap();
    let Ok((k, _)) = solve_semicircle(&mu, &cls, 0.5, &SolverConfig::default()) else {
        return verdict(false, "solver failed");
    };
    let lambda0 = (1.5 * 3f64.sqrt()).powf(2.0 / 3.0);
    let k0 = Polygon::from_support(
        &[
            UnitVector2::new(w),
            UnitVector2::new(w + 2.0 * PI / 3.0),
            UnitVector2::new(w - 2.0 * PI / 3.0),
        ],
        &[1.0, 0.0, 0.0],
    )
    .unwrap()
    .dilate(lambda0);
    let d = support_distance(&k, &k0);
    verdict(
        d <= 1e-10,
        format!("lambda0 = {lambda0:.10}, support distance to lambda0 K0 = {d:.1e}"),
    )
}

fn antipodal() -> Verdict {
    let mu = MeasureSpec::new(vec![Atom::new(0.4, 1.0), Atom::new(0.4 + PI, 3.0)], None).unwrap();
    let t = Instant::now();
    let r = solve(
        &mu,
        0.5,
        &SymmetryGroup::Trivial,
        &PipelineConfig::default(),
    );
    let elapsed = t.elapsed();
    let ok = matches!(r, Err(Error::AntipodalPair));
    verdict(
        ok && elapsed < Duration::from_millis(10),
        format!(
            "{} in {elapsed:.1?}",
            if ok { "AntipodalPair" } else { "wrong outcome" }
        ),
    )
}

fn round_trips() -> Verdict {
    let mut r = rng(20_240_501);
    let cfg = SolverConfig::default();
    let t = Instant::now();
    let (mut within_1e4, mut within_1e3) = (0, 0);
    let mut worst: f64 = 0.0;
    let cases = 200;
    for c in 0..cases {
        let n = r.random_range(3..=40);
        let poly = random_polygon(&mut r, n, 0.2, 2.0);
        let p = [0.2, 0.5, 0.8][c % 3];
        let mu = lp_surface_measure(&poly, p).unwrap();
        let res = match solve_discrete(&mu, p, &SymmetryGroup::Trivial, &cfg) {
            Ok((k, _)) => residual(&k, &mu, p),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(res);
        within_1e4 += (res <= 1e-4) as usize;
        within_1e3 += (res <= 1e-3) as usize;
    }
    let elapsed = t.elapsed();
    verdict(
        within_1e4 * 100 >= 99 * cases && within_1e3 == cases && elapsed < Duration::from_secs(300),
        format!("{within_1e4}/{cases} within 1e-4, {within_1e3}/{cases} within 1e-3, worst {worst:.1e}, {elapsed:.1?}"),
    )
}

fn dihedral() -> Verdict {
    let g = SymmetryGroup::Dihedral { k: 5, axis: 0.3 };
    let atoms: Vec<Atom> = g
        .elements()
        .into_iter()
        .map(|a| Atom::new(a.apply_angle(0.3 + 0.2), 1.7))
        .collect();
    let mu = DiscreteMeasure::new(atoms).unwrap();
    if mu.len() != 10 {
        return verdict(false, format!("{} atoms instead of 10", mu.len()));
    }
    let Ok((k, _)) = solve_discrete(&mu, 0.5, &g, &SolverConfig::default()) else {
        return verdict(false, "solver failed");
    };
    let worst = g
        .elements()
        .into_iter()
        .map(|a| support_distance(&k, &k.apply_isometry(a)))
        .fold(0.0, f64::max);
    verdict(
        worst <= 1e-8,
        format!("max over 10 elements of d(P, AP) = {worst:.1e}"),
    )
}

fn semicircles() -> Verdict {
    let mut r = rng(77);
    let cfg = SolverConfig::default();
    let (mut worst_res, mut worst_below, mut worst_v): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut done = 0;
    while done < 50 {
        let rot = r.random_range(0.0..TAU);
        let n = r.random_range(1..6);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                (
                    rot + r.random_range(0.05..PI - 0.05),
                    r.random_range(0.2..3.0),
                )
            })
            .collect();
        if r.random_bool(0.5) {
            pairs.push((rot, r.random_range(0.2..3.0)));
        }
        if r.random_bool(0.5) {
            pairs.push((rot + PI, r.random_range(0.2..3.0)));
        }
        let mu = DiscreteMeasure::from_pairs(&pairs).unwrap();
        let cls = classify(&mu).unwrap();
        let ClassTag::Semicircle { v, w } = cls.tag else {
            continue;
        };
        done += 1;
        let p = r.random_range(0.1..0.9);
        let Ok((k, _)) = solve_semicircle(&mu, &cls, p, &cfg) else {
            return verdict(false, format!("solver failed on {pairs:?}"));
        };
        let s = lp_surface_measure(&k, p).unwrap();
        worst_res = worst_res.max(residual(&k, &mu, p));
        let below: f64 = s
            .atoms()
            .iter()
            .filter(|a| UnitVector2::new(a.theta).vector().dot(&w.vector()) < -1e-12)
            .map(|a| a.mass)
            .sum();
        worst_below = worst_below.max(below);
        for d in [v, v.opposite()] {
            worst_v = worst_v.max((s.mass_at(d.theta(), 1e-9) - mu.mass_at(d.theta(), 1e-9)).abs());
        }
    }
    verdict(
        worst_res <= 1e-4 && worst_below <= 1e-10 && worst_v <= 1e-8,
        format!("residual {worst_res:.1e}, mass below {worst_below:.1e}, |mass at ±v - mu| {worst_v:.1e}"),
    )
}

fn discretization() -> Verdict {
    let d = Density::from_fn(720, |t| 1.0 + 0.3 * t.cos()).unwrap();
    let mu = MeasureSpec::from_density(d).unwrap();
    // a zero body tolerance runs every level up to m_max
    let cfg = PipelineConfig {
        m0: 64,
        m_max: 2048,
        tol_body: 0.0,
        ..PipelineConfig::default()
    };
    let t = Instant::now();
    let out = match solve_detailed(&mu, 0.5, &SymmetryGroup::Trivial, &cfg) {
        Ok(o) => o,
        Err(e) => return verdict(false, format!("pipeline failed: {e}")),
    };
    let elapsed = t.elapsed();
    let hist = &out.report.loop_history;
    let changes: Vec<f64> = hist.iter().filter_map(|e| e.weak_change).collect();
    let ratios: Vec<f64> = changes.windows(2).map(|w| w[1] / w[0]).collect();
    let worst_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let ma = out.report.monge_ampere_residual.unwrap_or(f64::INFINITY);
    let levels_ok = hist.first().map(|e| e.m) == Some(64) && hist.last().map(|e| e.m) == Some(2048);
    verdict(
        levels_ok && !ratios.is_empty() && worst_ratio <= 0.75 && ma <= 1e-2 && elapsed < Duration::from_secs(120),
        format!(
            "m = 64..{}, worst weak-change ratio {worst_ratio:.3}, Monge-Ampere residual {ma:.1e}, {elapsed:.1?}",
            hist.last().map_or(0, |e| e.m)
        ),
    )
}

fn highdimno() -> Verdict {
    let t = Instant::now();
    let ms = [2.0, 10.0, 100.0, 1e3, 1e4];
    let (mut base_err, mut limit_err): (f64, f64) = (0.0, 0.0);
    let mut diam_ok = true;
    for p in [0.25, 0.5, 0.75] {
        let rows = match highdimno_limit_check(p, &ms) {
            Ok(r) => r,
            Err(e) => return verdict(false, format!("p = {p}: {e}")),
        };
        let target = [8.0, 2f64.powf(p / 2.0), 2f64.powf(p / 2.0)];
        for row in &rows {
            for (got, want) in row.untranslated.iter().zip(target) {
                base_err = base_err.max((got - want).abs());
            }
            diam_ok &= row.diameter >= 4.0 * row.m;
        }
        let last = rows.last().unwrap();
        for mass in [last.masses[3], last.masses[4]] {
            limit_err = limit_err.max((mass / 3.0 - 1.0).abs());
        }
    }
    let elapsed = t.elapsed();
    verdict(
        base_err <= 1e-10 && limit_err <= 0.01 && diam_ok && elapsed < Duration::from_secs(10),
        format!("untranslated error {base_err:.1e}, u± at m = 1e4 off 3 by {limit_err:.1e}, diameter >= 4m: {diam_ok}, {elapsed:.1?}"),
    )
}

/// Gauss curvature of the rotational graph `|x|^q` by central differences.
fn curvature_fd(q: f64, n: usize, r: f64) -> f64 {
    let g = |x: f64| x.powf(q);
    let e = 1e-4;
    let d1 = (g(r + e) - g(r - e)) / (2.0 * e);
    let d2 = (g(r + e) - 2.0 * g(r) + g(r - e)) / (e * e);
    d2 * (d1 / r).powi(n as i32 - 2) / (1.0 + d1 * d1).powf(0.5 * (n as f64 + 1.0))
}

fn oboundary() -> Verdict {
    let t = Instant::now();
    let (mut exponent, mut h_min, mut kappa_err, mut identity): (f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0);
    let mut positive = true;
    for (n, p) in [(2, 0.5), (3, 0.5), (3, 0.9)] {
        let prof = match oboundary_profile(p, n, 256) {
            Ok(x) => x,
            Err(e) => return verdict(false, format!("n = {n}, p = {p}: {e}")),
        };
        exponent = exponent.max(prof.exponent.abs());
        positive &= prof.rows.iter().all(|r| r.f > 0.0 && r.f.is_finite());
        h_min = h_min.max(prof.h_at_min_r);
        identity = identity.max(prof.identity_error);
        kappa_err = kappa_err.max((prof.row(0.5).kappa / curvature_fd(prof.q, n, 0.5) - 1.0).abs());
    }
    let elapsed = t.elapsed();
    verdict(
        exponent <= 1e-12 && positive && h_min < 1e-10 && kappa_err <= 1e-4 && identity <= 1e-12
            && elapsed < Duration::from_secs(5),
        format!(
            "exponent {exponent:.1e}, f > 0: {positive}, h(1e-6) <= {h_min:.1e}, kappa vs oracle {kappa_err:.1e}, f identity {identity:.1e}, {elapsed:.1?}"
        ),
    )
}

fn gradients() -> Verdict {
    let mut r = rng(4242);
    let inner = SolverConfig {
        tol_inner: 1e-13,
        max_inner_iters: 500,
        ..SolverConfig::default()
    };
    let (mut env_err, mut vol_err): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let n = r.random_range(3..16);
        let poly = random_full_polygon(&mut r, n, 0.02);
        let p = r.random_range(0.1..0.9);
        let mu = DiscreteMeasure::from_pairs(
            &poly
                .normals()
                .iter()
                .map(|u| (u.theta(), r.random_range(0.5..2.0)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let i = r.random_range(0..poly.len());
        let at = |h: &[f64]| Polygon::from_support(poly.normals(), h).unwrap();
        let bump = |e: f64| {
            let mut h = poly.support().to_vec();
            h[i] += e;
            h
        };
        let value =
            |q: &Polygon| phi(q, &xi_of_polygon(q, &mu, p, &inner).unwrap(), &mu, p).unwrap();

        let e = 1e-5;
        let fd = (value(&at(&bump(e))) - value(&at(&bump(-e)))) / (2.0 * e);
        let xi = xi_of_polygon(&poly, &mu, p, &inner).unwrap();
        let u = poly.normals()[i];
        let exact = mu.mass_at(u.theta(), 1e-12)
            * p
            * (poly.support()[i] - u.vector().dot(&xi)).powf(p - 1.0);
        env_err = env_err.max((fd - exact).abs() / exact.abs());

        let e = 1e-6;
        let fd = (at(&bump(e)).area() - at(&bump(-e)).area()) / (2.0 * e);
        let l = poly.edge_lengths()[i];
        vol_err = vol_err.max((fd - l).abs() / l);
    }
    verdict(
        env_err <= 1e-5 && vol_err <= 1e-5,
        format!("envelope {env_err:.1e}, volume {vol_err:.1e} over 100 configurations"),
    )
}

fn hemisphere_bound() -> Verdict {
    let mut r = rng(99);
    let grid = 10_000;
    let directions: Vec<_> = (0..grid)
        .map(|k| UnitVector2::new(k as f64 * TAU / grid as f64).vector())
        .collect();
    let mut violations = 0;
    for _ in 0..50 {
        let n = r.random_range(3..30);
        let mu = random_general_measure(&mut r, n);
        let Some(delta) = hemisphere_delta(&mu) else {
            violations += 1;
            continue;
        };
        if mu.total_mass() >= 1.0 / delta {
            violations += 1;
        }
        let units: Vec<_> = mu
            .atoms()
            .iter()
            .map(|a| (UnitVector2::new(a.theta).vector(), a.mass))
            .collect();
        for v in &directions {
            let cap: f64 = units
                .iter()
                .filter(|(u, _)| u.dot(v) > delta)
                .map(|(_, m)| m)
                .sum();
            violations += (cap <= delta) as usize;
        }
    }
    verdict(
        violations == 0,
        format!("{violations} violations on a {grid}-direction grid, 50 measures"),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 12] = [
        ("closed-form square", square),
        ("closed-form equilateral triangle", triangle),
        ("single direction", single_direction),
        ("antipodal pair", antipodal),
        ("round trip", round_trips),
        ("dihedral symmetry", dihedral),
        ("semicircle reduction", semicircles),
        ("discretization convergence", discretization),
        ("unbounded polytopes in R^3", highdimno),
        ("origin on the boundary", oboundary),
        ("gradient checks", gradients),
        ("hemisphere delta", hemisphere_bound),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = run();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        failed += (!v.pass) as usize;
        println!(
            "{tag} {:>2} {name}: {} [{:.1?}]",
            k + 1,
            v.detail,
            t.elapsed()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
