use nalgebra::Vector3;

use super::discrete::{Atom, DiscreteMeasure, DiscreteMeasure3};
use crate::error::{Error, Result};
use crate::geometry::{Polygon, UnitVector2, EPS_GEOM};

fn check_p_closed(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidP(format!("p = {p} must lie in (0, 1]")))
    }
}

/// `S_{P,p}`: an atom `h_i^{1−p} ℓ_i` at every normal with `h_i > 0` and
/// `ℓ_i > 0`.
pub fn lp_surface_measure(poly: &Polygon, p: f64) -> Result<DiscreteMeasure> {
    check_p_closed(p)?;
    if let Some((index, &support)) = poly
        .support()
        .iter()
        .enumerate()
        .find(|(_, &h)| h < -EPS_GEOM)
    {
        return Err(Error::OriginOutside { index, support });
    }
    let atoms = poly
        .normals()
        .iter()
        .zip(poly.support())
        .zip(poly.edge_lengths())
        .filter(|((_, &h), &l)| h > 0.0 && l > 0.0)
        .map(|((u, &h), &l)| Atom::new(u.theta(), h.powf(1.0 - p) * l));
    DiscreteMeasure::from_nonnegative(atoms)
}

/// `S_{P,p}` for a 3-D polytope with given facets (vertex index lists in
/// either orientation) and outward unit normals.
pub fn lp_surface_measure_3d(
    vertices: &[Vector3<f64>],
    facets: &[Vec<usize>],
    normals: &[Vector3<f64>],
    p: f64,
) -> Result<DiscreteMeasure3> {
    check_p_closed(p)?;
    if facets.len() != normals.len() {
        return Err(Error::InvalidInput(format!(
            "{} facets but {} normals",
            facets.len(),
            normals.len()
        )));
    }
    let scale = vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let mut atoms = Vec::with_capacity(facets.len());
    for (fi, (facet, n)) in facets.iter().zip(normals).enumerate() {
        if facet.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "facet {fi} has fewer than 3 vertices"
            )));
        }
        if let Some(&bad) = facet.iter().find(|&&i| i >= vertices.len()) {
            return Err(Error::InvalidInput(format!(
                "facet {fi} references vertex {bad}"
            )));
        }
        if (n.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "normal {fi} is not a unit vector"
            )));
        }
        let v0 = vertices[facet[0]];
        let h = v0.dot(n);
        let deviation = facet
            .iter()
            .map(|&i| (vertices[i].dot(n) - h).abs())
            .fold(0.0, f64::max);
        if deviation > 1e-9 * scale {
            return Err(Error::NonPlanarFacet {
                facet: fi,
                deviation,
            });
        }
        if h < -EPS_GEOM * scale {
            return Err(Error::OriginOutside {
                index: fi,
                support: h,
            });
        }
        let area = 0.5
            * facet
                .windows(2)
                .skip(1)
                .map(|w| (vertices[w[0]] - v0).cross(&(vertices[w[1]] - v0)).dot(n))
                .sum::<f64>()
                .abs();
        if h > 0.0 && area > 0.0 {
            atoms.push((*n, h.powf(1.0 - p) * area));
        }
    }
    Ok(DiscreteMeasure3 { atoms })
}

/// Both sides of the two-point inequality
/// `min{h(ν(x₁)), ⟨x₁, ν(x₂)⟩}^{1−p} ⟨x₂ − x₁, u⟩ ≤ S_{P,p}(S¹)`, with `x₁`, `x₂`
/// the midpoints of the edges with normal indices `i1`, `i2`.
pub fn qzm_check(
    poly: &Polygon,
    i1: usize,
    i2: usize,
    u: UnitVector2,
    p: f64,
) -> Result<(f64, f64)> {
    check_p_closed(p)?;
    let pre = |m: String| Err(Error::PreconditionViolated(m));
    let n = poly.len();
    if i1 >= n || i2 >= n {
        return pre(format!("edge index out of range ({i1}, {i2}; {n} normals)"));
    }
    let mid = |i: usize| poly.edge(i).map(|(a, b)| 0.5 * (a + b));
    let (Some(x1), Some(x2)) = (mid(i1), mid(i2)) else {
        return pre("both edges must be active".into());
    };
    let (n1, n2) = (poly.normals()[i1], poly.normals()[i2]);
    if n1.is_antipodal(n2, 1e-12) {
        return pre("edges are opposite (antipodal normals)".into());
    }
    let h1 = poly.support()[i1];
    let x1_n2 = n2.dot(&x1);
    if x1_n2 <= 0.0 {
        return pre(format!("<x1, nu(x2)> = {x1_n2} is not positive"));
    }
    let du = u.dot(&(x2 - x1));
    if du <= 0.0 {
        return pre(format!("<x2 - x1, u> = {du} is not positive"));
    }
    let lhs = h1.min(x1_n2).max(0.0).powf(1.0 - p) * du;
    let rhs = lp_surface_measure(poly, p)?.total_mass();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector2;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn poly(ts: &[f64], h: &[f64]) -> Polygon {
        let n: Vec<UnitVector2> = ts.iter().map(|&t| UnitVector2::new(t)).collect();
        Polygon::from_support(&n, h).unwrap()
    }

    fn axes() -> [f64; 4] {
        [0.0, FRAC_PI_2, PI, 1.5 * PI]
    }

    #[test]
    fn square_masses() {
        let m = lp_surface_measure(&poly(&axes(), &[1.0; 4]), 0.5).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.masses().iter().all(|x| (x - 2.0).abs() < 1e-14));
    }

    #[test]
    fn origin_apex_triangle_has_one_atom() {
        let t = poly(
            &[FRAC_PI_2, 7.0 * PI / 6.0, 11.0 * PI / 6.0],
            &[1.0, 0.0, 0.0],
        );
        for p in [0.2, 0.5, 0.9] {
            let m = lp_surface_measure(&t, p).unwrap();
            assert_eq!(m.len(), 1);
            assert!((m.atoms()[0].mass - 2.0 / 3f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn origin_outside() {
        let sq = poly(&axes(), &[1.0; 4]).translate(&Vector2::new(1.5, 0.0));
        assert!(matches!(
            lp_surface_measure(&sq, 0.5),
            Err(Error::OriginOutside { .. })
        ));
    }

    #[test]
    fn cube_3d() {
        let mut v = Vec::new();
        for i in 0..8 {
            let b = |k: usize| if i >> k & 1 == 1 { 0.5 } else { -0.5 };
            v.push(Vector3::new(b(0), b(1), b(2)));
        }
        // faces listed by fixed coordinate
        let faces: Vec<(Vec<usize>, Vector3<f64>)> = vec![
            (vec![1, 3, 7, 5], Vector3::x()),
            (vec![0, 4, 6, 2], -Vector3::x()),
            (vec![2, 6, 7, 3], Vector3::y()),
            (vec![0, 1, 5, 4], -Vector3::y()),
            (vec![4, 5, 7, 6], Vector3::z()),
            (vec![0, 2, 3, 1], -Vector3::z()),
        ];
        let (f, n): (Vec<_>, Vec<_>) = faces.into_iter().unzip();
        let m = lp_surface_measure_3d(&v, &f, &n, 0.5).unwrap();
        assert_eq!(m.atoms.len(), 6);
        for (_, mass) in &m.atoms {
            assert!((mass - 0.5f64.sqrt()).abs() < 1e-14);
        }
        let mut bent = v.clone();
        bent[7].x += 1e-3;
        assert!(matches!(
            lp_surface_measure_3d(&bent, &f, &n, 0.5),
            Err(Error::NonPlanarFacet { .. })
        ));
    }

    #[test]
    fn qzm_examples() {
        let sq = poly(&axes(), &[1.0; 4]);
        assert!(matches!(
            qzm_check(&sq, 0, 1, UnitVector2::new(PI / 4.0), 0.5),
            Err(Error::PreconditionViolated(_))
        ));
        let shifted = poly(&axes(), &[1.5, 1.5, 0.5, 0.5]);
        let (lhs, rhs) = qzm_check(&shifted, 0, 1, UnitVector2::new(0.75 * PI), 0.5).unwrap();
        assert!((lhs - 1.0).abs() < 1e-14);
        let expect = 1.5f64.sqrt() * 4.0 + 0.5f64.sqrt() * 4.0;
        assert!((rhs - expect).abs() < 1e-13);
        assert!(lhs <= rhs);
    }
}
