use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{check_p_open, Error, Result};
use crate::measure::lp_surface_measure_3d;

use super::csv_table;

/// A polytope in R³ given by its vertices, facets (vertex loops) and outer
/// unit normals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Polytope3 {
    pub vertices: Vec<[f64; 3]>,
    pub facets: Vec<Vec<usize>>,
    pub normals: Vec<[f64; 3]>,
}

impl Polytope3 {
    fn vertex(&self, i: usize) -> Vector3<f64> {
        Vector3::from(self.vertices[i])
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.vertices.len() {
            for j in 0..i {
                d = d.max((self.vertex(i) - self.vertex(j)).norm());
            }
        }
        d
    }

    /// `S_{P,p}` mass at each facet normal, in facet order.
    pub fn lp_masses(&self, p: f64) -> Result<Vec<f64>> {
        let v: Vec<Vector3<f64>> = self.vertices.iter().map(|&x| Vector3::from(x)).collect();
        let normals: Vec<Vector3<f64>> = self.normals.iter().map(|&x| Vector3::from(x)).collect();
        let s = lp_surface_measure_3d(&v, &self.facets, &normals, p)?;
        Ok(normals.iter().map(|u| s.mass_near(u, 1e-6)).collect())
    }

    pub fn translated(&self, t: Vector3<f64>) -> Polytope3 {
        Polytope3 {
            vertices: self
                .vertices
                .iter()
                .map(|&x| (Vector3::from(x) + t).into())
                .collect(),
            ..self.clone()
        }
    }
}

/// Member `m` of the unbounded sequence: `P̃_m` and its translate
/// `P_m = P̃_m − t_m u₀`, which has `h(u_m^±) = m^{−2/(1−p)}`.
///
/// Facets are ordered `u₀, u₁, u₂, u_m^+, u_m^−`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polytope3Instance {
    pub m: f64,
    pub p: f64,
    pub a_m: f64,
    pub t_m: f64,
    pub untranslated: Polytope3,
    pub translated: Polytope3,
}

/// Outer normals in facet order from the closed forms.
fn closed_form_normals(m: f64, a: f64) -> [Vector3<f64>; 5] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let r = a.hypot(m);
    [
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(-s, s, 0.0),
        Vector3::new(-s, -s, 0.0),
        Vector3::new(-a / r, 0.0, m / r),
        Vector3::new(-a / r, 0.0, -m / r),
    ]
}

/// Builds member `m ≥ 2` for `p ∈ (0, 1)`. Facet normals are computed from
/// the vertex loops and checked against the closed forms.
pub fn highdimno_polytope(p: f64, m: f64) -> Result<Polytope3Instance> {
    check_p_open(p)?;
    if !(m >= 2.0 && m.is_finite()) {
        return Err(Error::InvalidInput(format!("m = {m} must be at least 2")));
    }
    let a = m.powf(-(2.0 - p));
    let vertices = [
        Vector3::new(0.0, m, 0.0),
        Vector3::new(m, 2.0 * m, a),
        Vector3::new(m, 2.0 * m, -a),
        Vector3::new(0.0, -m, 0.0),
        Vector3::new(m, -2.0 * m, a),
        Vector3::new(m, -2.0 * m, -a),
    ];
    let facets: Vec<Vec<usize>> = vec![
        vec![1, 2, 5, 4],
        vec![0, 1, 2],
        vec![3, 4, 5],
        vec![0, 3, 4, 1],
        vec![0, 3, 5, 2],
    ];
    let inner = vertices.iter().sum::<Vector3<f64>>() / vertices.len() as f64;
    let expected = closed_form_normals(m, a);
    let mut normals = Vec::with_capacity(5);
    for (fi, facet) in facets.iter().enumerate() {
        // Newell's area vector of the loop, oriented away from the interior
        let mut n = Vector3::zeros();
        let mut centroid = Vector3::zeros();
        for (k, &i) in facet.iter().enumerate() {
            let next = vertices[facet[(k + 1) % facet.len()]];
            n += vertices[i].cross(&next);
            centroid += vertices[i];
        }
        centroid /= facet.len() as f64;
        let mut n = n.normalize();
        if n.dot(&(centroid - inner)) < 0.0 {
            n = -n;
        }
        let dev = (n - expected[fi]).amax();
        if dev > 1e-12 {
            return Err(Error::PreconditionViolated(format!(
                "facet {fi} normal deviates from the closed form by {dev:e}"
            )));
        }
        normals.push(expected[fi].into());
    }
    let r = a.hypot(m);
    let t_m = m.powf(-2.0 / (1.0 - p)) * r / a;
    let untranslated = Polytope3 {
        vertices: vertices.iter().map(|&v| v.into()).collect(),
        facets,
        normals,
    };
    let translated = untranslated.translated(Vector3::new(-t_m, 0.0, 0.0));
    Ok(Polytope3Instance {
        m,
        p,
        a_m: a,
        t_m,
        untranslated,
        translated,
    })
}

/// One row of [`highdimno_limit_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub m: f64,
    pub a_m: f64,
    pub t_m: f64,
    /// Masses of `S_{P_m,p}` at `u₀, u₁, u₂, u_m^+, u_m^−`.
    pub masses: [f64; 5],
    /// Masses of `S_{P̃_m,p}` at `u₀, u₁, u₂`.
    pub untranslated: [f64; 3],
    pub diameter: f64,
    /// Angle between `u_m^+` and `(0, 0, 1)`, `arctan(a_m/m)`.
    pub normal_deviation: f64,
}

/// Masses and diameters along an increasing list of `m`. The targets are
/// `(8, 2^{p/2}, 2^{p/2}, 3, 3)`.
pub fn highdimno_limit_check(p: f64, m_list: &[f64]) -> Result<Vec<LimitRow>> {
    if m_list.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("m_list must be increasing".into()));
    }
    m_list
        .iter()
        .map(|&m| {
            let inst = highdimno_polytope(p, m)?;
            let masses = inst.translated.lp_masses(p)?;
            let base = inst.untranslated.lp_masses(p)?;
            Ok(LimitRow {
                m,
                a_m: inst.a_m,
                t_m: inst.t_m,
                masses: [masses[0], masses[1], masses[2], masses[3], masses[4]],
                untranslated: [base[0], base[1], base[2]],
                diameter: inst.translated.diameter(),
                normal_deviation: (inst.a_m / m).atan(),
            })
        })
        .collect()
}

impl LimitRow {
    pub fn csv(rows: &[LimitRow]) -> String {
        csv_table(
            [
                "m",
                "a_m",
                "t_m",
                "mass_u0",
                "mass_u1",
                "mass_u2",
                "mass_u_plus",
                "mass_u_minus",
                "base_u0",
                "base_u1",
                "base_u2",
                "diameter",
                "normal_deviation",
            ],
            rows.iter().map(|r| {
                [
                    r.m,
                    r.a_m,
                    r.t_m,
                    r.masses[0],
                    r.masses[1],
                    r.masses[2],
                    r.masses[3],
                    r.masses[4],
                    r.untranslated[0],
                    r.untranslated[1],
                    r.untranslated[2],
                    r.diameter,
                    r.normal_deviation,
                ]
            }),
        )
    }
}
