use std::f64::consts::PI;

use nalgebra::Vector2;

use super::angle::{ccw_gap, max_gap, UnitVector2, EPS_ANG};
use super::isometry::Isometry2;
use crate::error::{Error, Result};

/// Absolute geometric tolerance on coordinates of order one.
pub const EPS_GEOM: f64 = 1e-10;

/// A convex polygon `{x : ⟨x, u_i⟩ ≤ h_i}` given by outward unit normals in
/// increasing angle and support numbers.
///
/// Redundant constraints are kept but flagged inactive (zero edge length).
/// The remaining constraints form the *chain*: consecutive chain normals are
/// less than π apart and every chain edge has nonnegative length.
#[derive(Clone, Debug)]
pub struct Polygon {
    normals: Vec<UnitVector2>,
    support: Vec<f64>,
    lengths: Vec<f64>,
    active: Vec<bool>,
    chain: Vec<usize>,
    /// `vertices[k]` closes the edge of `chain[k]` (meets `chain[k + 1]`).
    vertices: Vec<Vector2<f64>>,
    area: f64,
}

#[derive(Clone, Copy)]
struct Line {
    c: f64,
    s: f64,
    h: f64,
}

impl Line {
    fn new(u: UnitVector2, h: f64) -> Self {
        let (s, c) = u.theta().sin_cos();
        Line { c, s, h }
    }
}

fn meet(a: Line, b: Line) -> Vector2<f64> {
    let det = a.c * b.s - a.s * b.c;
    Vector2::new((a.h * b.s - b.h * a.s) / det, (a.c * b.h - b.c * a.h) / det)
}

/// Length of the edge on line `i` between its intersections with `a`
/// (clockwise neighbour) and `b` (counterclockwise neighbour).
fn edge_between(a: Line, i: Line, b: Line) -> f64 {
    let cos1 = a.c * i.c + a.s * i.s;
    let sin1 = a.c * i.s - a.s * i.c;
    let cos2 = i.c * b.c + i.s * b.s;
    let sin2 = i.c * b.s - i.s * b.c;
    (a.h - i.h * cos1) / sin1 + (b.h - i.h * cos2) / sin2
}

impl Polygon {
    /// Builds `K = ∩ {⟨x, u_i⟩ ≤ h_i}`. Normals need not be sorted; they are
    /// sorted together with their support numbers.
    pub fn from_support(normals: &[UnitVector2], support: &[f64]) -> Result<Polygon> {
        if normals.len() != support.len() {
            return Err(Error::InvalidInput(format!(
                "support: expected {} values, got {}",
                normals.len(),
                support.len()
            )));
        }
        if let Some(i) = support.iter().position(|h| !h.is_finite()) {
            return Err(Error::InvalidInput(format!("support[{i}] is not finite")));
        }
        if normals.is_empty() {
            return Err(Error::Unbounded);
        }
        let mut order: Vec<usize> = (0..normals.len()).collect();
        order.sort_by(|&a, &b| normals[a].theta().total_cmp(&normals[b].theta()));
        let normals: Vec<UnitVector2> = order.iter().map(|&i| normals[i]).collect();
        let support: Vec<f64> = order.iter().map(|&i| support[i]).collect();
        let n = normals.len();
        for k in 0..n {
            let next = (k + 1) % n;
            if n > 1 && normals[k].approx_eq(normals[next], EPS_ANG) {
                return Err(Error::DuplicateNormal {
                    theta: normals[next].theta(),
                });
            }
        }

        let angles: Vec<f64> = normals.iter().map(|u| u.theta()).collect();
        let (gap, k) = max_gap(&angles);
        if gap > PI + EPS_ANG {
            return Err(Error::Unbounded);
        }
        if gap >= PI - EPS_ANG {
            // the two normals bounding the gap are antipodal: a slab
            let b = (k + 1) % n;
            if support[k] + support[b] < -EPS_GEOM {
                return Err(Error::EmptyBody);
            }
            return Err(Error::Unbounded);
        }

        let chain = reduce_chain(&normals, &support);
        Self::assemble(normals, support, chain)
    }

    /// Computes lengths, vertices and area for a given chain of constraints.
    fn assemble(
        normals: Vec<UnitVector2>,
        support: Vec<f64>,
        chain: Vec<usize>,
    ) -> Result<Polygon> {
        let n = normals.len();
        let m = chain.len();
        if m < 3 {
            return Err(Error::EmptyBody);
        }
        let lines: Vec<Line> = chain
            .iter()
            .map(|&i| Line::new(normals[i], support[i]))
            .collect();
        let mut lengths = vec![0.0; n];
        let mut active = vec![false; n];
        let mut area = 0.0;
        for k in 0..m {
            let a = lines[(k + m - 1) % m];
            let b = lines[(k + 1) % m];
            let len = edge_between(a, lines[k], b);
            if len < -EPS_GEOM {
                return Err(Error::EmptyBody);
            }
            let len = len.max(0.0);
            let i = chain[k];
            lengths[i] = len;
            active[i] = len > EPS_GEOM;
            area += 0.5 * support[i] * len;
        }
        if area <= EPS_GEOM {
            return Err(Error::Degenerate { area });
        }
        let vertices = (0..m).map(|k| meet(lines[k], lines[(k + 1) % m])).collect();
        Ok(Polygon {
            normals,
            support,
            lengths,
            active,
            chain,
            vertices,
            area,
        })
    }

    pub fn normals(&self) -> &[UnitVector2] {
        &self.normals
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    /// Edge length per normal; zero for redundant constraints.
    pub fn edge_lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    /// `½ Σ h_i ℓ_i`.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Distinct vertices in counterclockwise order.
    pub fn vertices(&self) -> Vec<Vector2<f64>> {
        let mut out: Vec<Vector2<f64>> = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            if out.last().is_none_or(|w| (w - v).norm() > EPS_GEOM) {
                out.push(*v);
            }
        }
        if out.len() > 1 && (out[0] - out[out.len() - 1]).norm() <= EPS_GEOM {
            out.pop();
        }
        out
    }

    /// Endpoints `(start, end)` of the edge with normal index `i`, if active.
    pub fn edge(&self, i: usize) -> Option<(Vector2<f64>, Vector2<f64>)> {
        if !self.active[i] {
            return None;
        }
        let k = self.chain.iter().position(|&c| c == i)?;
        let m = self.chain.len();
        Some((self.vertices[(k + m - 1) % m], self.vertices[k]))
    }

    /// A vertex of the face with outer normal at angle `theta`.
    pub fn support_vertex(&self, theta: f64) -> Vector2<f64> {
        let theta = super::angle::canonical_angle(theta);
        let m = self.chain.len();
        let pos = self
            .chain
            .partition_point(|&i| self.normals[i].theta() <= theta);
        // the chain normal at or clockwise of theta owns the vertex closing its edge
        let k = (pos + m - 1) % m;
        self.vertices[k]
    }

    /// `h_K(u)` for `u` at angle `theta`.
    pub fn support_at(&self, theta: f64) -> f64 {
        UnitVector2::new(theta).dot(&self.support_vertex(theta))
    }

    /// `h_K(u_i)` at every stored normal (equal to `support()` on active ones).
    pub fn tight_support(&self) -> Vec<f64> {
        self.normals
            .iter()
            .enumerate()
            .map(|(i, u)| {
                if self.active[i] {
                    self.support[i]
                } else {
                    self.support_at(u.theta())
                }
            })
            .collect()
    }

    /// Whether `x` satisfies every constraint up to `EPS_GEOM`.
    pub fn contains(&self, x: &Vector2<f64>) -> bool {
        self.normals
            .iter()
            .zip(&self.support)
            .all(|(u, h)| u.dot(x) <= h + EPS_GEOM)
    }

    pub fn diameter(&self) -> f64 {
        let v = self.vertices();
        let n = v.len();
        if n < 2 {
            return 0.0;
        }
        let cross =
            |o: &Vector2<f64>, a: &Vector2<f64>, b: &Vector2<f64>| (a - o).perp(&(b - o)).abs();
        let mut best = 0.0_f64;
        let mut j = 1;
        for i in 0..n {
            let i1 = (i + 1) % n;
            while cross(&v[i], &v[i1], &v[(j + 1) % n]) > cross(&v[i], &v[i1], &v[j]) {
                j = (j + 1) % n;
            }
            best = best.max((v[i] - v[j]).norm()).max((v[i1] - v[j]).norm());
        }
        best
    }

    /// `λK`.
    ///
    /// # Panics
    /// If `lambda` is not a positive finite number.
    pub fn dilate(&self, lambda: f64) -> Polygon {
        assert!(
            lambda > 0.0 && lambda.is_finite(),
            "dilation factor must be > 0"
        );
        let mut out = self.clone();
        out.support.iter_mut().for_each(|h| *h *= lambda);
        out.lengths.iter_mut().for_each(|l| *l *= lambda);
        out.vertices.iter_mut().for_each(|v| *v *= lambda);
        out.area *= lambda * lambda;
        out
    }

    /// `K − ξ`: moves the origin to the point `ξ`; support numbers become
    /// `h_i − ⟨ξ, u_i⟩`.
    pub fn translate(&self, xi: &Vector2<f64>) -> Polygon {
        let mut out = self.clone();
        for (h, u) in out.support.iter_mut().zip(&self.normals) {
            *h -= u.dot(xi);
        }
        out.vertices.iter_mut().for_each(|v| *v -= xi);
        out
    }

    /// `A K`.
    pub fn apply_isometry(&self, a: Isometry2) -> Polygon {
        let mapped: Vec<UnitVector2> = self
            .normals
            .iter()
            .map(|u| UnitVector2::new(a.apply_angle(u.theta())))
            .collect();
        let mut order: Vec<usize> = (0..mapped.len()).collect();
        order.sort_by(|&x, &y| mapped[x].theta().total_cmp(&mapped[y].theta()));
        let mut rank = vec![0; order.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        let normals = order.iter().map(|&i| mapped[i]).collect();
        let support = order.iter().map(|&i| self.support[i]).collect();
        let mut chain: Vec<usize> = self.chain.iter().map(|&i| rank[i]).collect();
        chain.sort_unstable();
        Self::assemble(normals, support, chain)
            .expect("isometric image of a valid polygon is valid")
    }
}

/// Drops constraints whose line passes on or outside the vertex formed by its
/// chain neighbours. Removal is only attempted when the neighbours are less
/// than π apart; the wedge they bound then lies inside the dropped half-plane.
fn reduce_chain(normals: &[UnitVector2], support: &[f64]) -> Vec<usize> {
    let n = normals.len();
    let lines: Vec<Line> = normals
        .iter()
        .zip(support)
        .map(|(u, h)| Line::new(*u, *h))
        .collect();
    let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
    let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut alive = vec![true; n];
    let mut queued = vec![true; n];
    let mut work: Vec<usize> = (0..n).rev().collect();
    let mut count = n;

    while let Some(i) = work.pop() {
        queued[i] = false;
        if !alive[i] || count <= 3 {
            continue;
        }
        let (a, b) = (prev[i], next[i]);
        let span = ccw_gap(normals[a].theta(), normals[i].theta())
            + ccw_gap(normals[i].theta(), normals[b].theta());
        if span >= PI - EPS_ANG {
            continue;
        }
        if edge_between(lines[a], lines[i], lines[b]) <= EPS_GEOM {
            alive[i] = false;
            count -= 1;
            next[a] = b;
            prev[b] = a;
            for j in [a, b] {
                if !queued[j] {
                    queued[j] = true;
                    work.push(j);
                }
            }
        }
    }
    (0..n).filter(|&i| alive[i]).collect()
}

/// `max_u |h_P(u) − h_Q(u)|`, evaluated exactly: between consecutive chain
/// normals of either polygon the difference is `⟨v_P − v_Q, u⟩`, whose extrema
/// on an arc sit at the arc ends or at `±(v_P − v_Q)`.
pub fn support_distance(p: &Polygon, q: &Polygon) -> f64 {
    let mut breaks: Vec<f64> = p
        .chain
        .iter()
        .map(|&i| p.normals[i].theta())
        .chain(q.chain.iter().map(|&i| q.normals[i].theta()))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let n = breaks.len();
    let mut best = 0.0_f64;
    for k in 0..n {
        let t0 = breaks[k];
        let width = if k + 1 < n {
            breaks[k + 1] - t0
        } else {
            breaks[0] + 2.0 * PI - t0
        };
        let mid = t0 + 0.5 * width;
        let d = p.support_vertex(mid) - q.support_vertex(mid);
        let f = |t: f64| UnitVector2::new(t).dot(&d).abs();
        best = best.max(f(t0)).max(f(t0 + width));
        if d.norm() > 0.0 {
            let phi = d.y.atan2(d.x);
            for cand in [phi, phi + PI] {
                if ccw_gap(t0, cand) <= width {
                    best = best.max(f(cand));
                }
            }
        }
    }
    best
}

/// Whether `u` is a nonnegative combination of `gens`.
pub fn in_positive_hull(u: UnitVector2, gens: &[UnitVector2]) -> bool {
    if gens.is_empty() {
        return false;
    }
    let mut angles: Vec<f64> = gens.iter().map(|g| g.theta()).collect();
    angles.sort_by(f64::total_cmp);
    let (gap, k) = max_gap(&angles);
    if gap < PI - EPS_ANG {
        return true;
    }
    // cone is the arc complementary to the largest gap
    let start = angles[(k + 1) % angles.len()];
    let width = 2.0 * PI - gap;
    let d = ccw_gap(start, u.theta());
    d <= width + EPS_ANG || d >= 2.0 * PI - EPS_ANG
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn uv(ts: &[f64]) -> Vec<UnitVector2> {
        ts.iter().map(|&t| UnitVector2::new(t)).collect()
    }

    fn square() -> Polygon {
        Polygon::from_support(&uv(&[0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]), &[1.0; 4]).unwrap()
    }

    fn shoelace(v: &[Vector2<f64>]) -> f64 {
        let n = v.len();
        0.5 * (0..n).map(|i| v[i].perp(&v[(i + 1) % n])).sum::<f64>()
    }

    #[test]
    fn unit_square() {
        let p = square();
        assert!((p.area() - 4.0).abs() < 1e-14);
        assert!(p.edge_lengths().iter().all(|l| (l - 2.0).abs() < 1e-14));
        let v = p.vertices();
        assert_eq!(v.len(), 4);
        for w in &v {
            assert!((w.x.abs() - 1.0).abs() < 1e-14 && (w.y.abs() - 1.0).abs() < 1e-14);
        }
        assert!(shoelace(&v) > 0.0);
    }

    #[test]
    fn redundant_diagonal_is_inactive() {
        let p = Polygon::from_support(
            &uv(&[0.0, PI / 4.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]),
            &[1.0, 2.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        assert_eq!(p.active(), &[true, false, true, true, true]);
        assert_eq!(p.edge_lengths()[1], 0.0);
        assert!((p.area() - 4.0).abs() < 1e-14);
        assert!((p.tight_support()[1] - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn inconsistent_pair_is_empty() {
        let r = Polygon::from_support(&uv(&[0.0, PI]), &[1.0, -2.0]);
        assert_eq!(r.unwrap_err(), Error::EmptyBody);
        let r = Polygon::from_support(&uv(&[0.0, PI]), &[1.0, 1.0]);
        assert_eq!(r.unwrap_err(), Error::Unbounded);
        let r = Polygon::from_support(&uv(&[0.0, 1.0, 2.0]), &[1.0, 1.0, 1.0]);
        assert_eq!(r.unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn inverted_triangle_is_empty() {
        let r = Polygon::from_support(
            &uv(&[FRAC_PI_2, 7.0 * PI / 6.0, 11.0 * PI / 6.0]),
            &[-1.0, -1.0, -1.0],
        );
        assert_eq!(r.unwrap_err(), Error::EmptyBody);
    }

    #[test]
    fn duplicate_normals_rejected() {
        let r = Polygon::from_support(&uv(&[0.0, 2.0, 4.0, 4.0]), &[1.0; 4]);
        assert!(matches!(r, Err(Error::DuplicateNormal { .. })));
    }

    #[test]
    fn zero_area_is_degenerate() {
        let r = Polygon::from_support(
            &uv(&[FRAC_PI_2, 7.0 * PI / 6.0, 11.0 * PI / 6.0]),
            &[0.0, 0.0, 0.0],
        );
        assert!(matches!(r, Err(Error::Degenerate { .. })));
    }

    #[test]
    fn origin_apex_triangle() {
        // normals π/2, 7π/6, 11π/6 with h = (1, 0, 0)
        let p = Polygon::from_support(
            &uv(&[FRAC_PI_2, 7.0 * PI / 6.0, 11.0 * PI / 6.0]),
            &[1.0, 0.0, 0.0],
        )
        .unwrap();
        let l = p.edge_lengths();
        assert!((l[0] - 2.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((p.area() - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((shoelace(&p.vertices()) - p.area()).abs() < 1e-14);
    }

    #[test]
    fn translate_matches_support_shift() {
        let q = square().translate(&Vector2::new(0.5, 0.0));
        let want = [0.5, 1.0, 1.5, 1.0];
        for (h, w) in q.support().iter().zip(want) {
            assert!((h - w).abs() < 1e-15);
        }
        assert!((support_distance(&square(), &q) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn dilate_and_rotate() {
        let p = square().dilate(2.0);
        assert_eq!(p.support(), &[2.0; 4]);
        assert!((p.area() - 16.0).abs() < 1e-13);
        let r = square().apply_isometry(Isometry2::Rotation(PI / 4.0));
        let th: Vec<f64> = r.normals().iter().map(|u| u.theta()).collect();
        for (k, t) in th.iter().enumerate() {
            assert!((t - (PI / 4.0 + k as f64 * FRAC_PI_2)).abs() < 1e-14);
        }
        assert!((r.area() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn support_distance_of_scaled_square() {
        let eps = 1e-3;
        let q = square().dilate(1.0 + eps);
        let d = support_distance(&square(), &q);
        // attained at the diagonal directions: ε·√2
        assert!((d - eps * 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(support_distance(&square(), &square()), 0.0);
    }

    #[test]
    fn diameter_of_square() {
        assert!((square().diameter() - 8f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn positive_hull_cases() {
        let g = uv(&[0.0, FRAC_PI_2]);
        assert!(in_positive_hull(UnitVector2::new(PI / 4.0), &g));
        assert!(!in_positive_hull(UnitVector2::new(3.0 * PI / 4.0), &g));
        assert!(in_positive_hull(UnitVector2::new(0.0), &g));
        let all = uv(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        for k in 0..16 {
            assert!(in_positive_hull(UnitVector2::new(k as f64 * 0.4), &all));
        }
        let wrap = uv(&[6.0, 0.3]);
        assert!(in_positive_hull(UnitVector2::new(0.0), &wrap));
        assert!(!in_positive_hull(UnitVector2::new(1.0), &wrap));
    }
}
