use std::fmt::Write;

use lpmink::{Polygon, Vector2};

const SIZE: f64 = 512.0;

/// Static plot: the body outline, the origin, and one bar per atom of `mu`
/// along its direction with length proportional to its mass.
pub fn render(poly: &Polygon, atoms: &[(f64, f64)]) -> String {
    let verts = poly.vertices();
    let radius = verts.iter().map(|v| v.norm()).fold(1e-12, f64::max);
    let max_mass = atoms.iter().map(|a| a.1).fold(0.0, f64::max);
    // body within 60% of the half-width, bars reach out to 95%
    let scale = 0.6 * 0.5 * SIZE / radius;
    let to_px = |v: Vector2<f64>| (0.5 * SIZE + scale * v.x, 0.5 * SIZE - scale * v.y);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let points: Vec<String> = verts
        .iter()
        .map(|&v| {
            let (x, y) = to_px(v);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="#dde8f5" stroke="#1f4e8c" stroke-width="1.5"/>"##,
        points.join(" ")
    );
    if max_mass > 0.0 {
        for &(theta, mass) in atoms {
            let u = Vector2::new(theta.cos(), theta.sin());
            let (x0, y0) = to_px(u * radius * 1.05);
            let len = 0.3 * 0.5 * SIZE * mass / max_mass;
            let (x1, y1) = (x0 + len * u.x, y0 - len * u.y);
            let _ = writeln!(
                out,
                r##"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="#c0392b" stroke-width="2"/>"##
            );
        }
    }
    let (ox, oy) = to_px(Vector2::zeros());
    let _ = writeln!(
        out,
        r#"<circle cx="{ox:.3}" cy="{oy:.3}" r="3" fill="black"/>"#
    );
    out.push_str("</svg>\n");
    out
}
