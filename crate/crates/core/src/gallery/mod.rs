//! Explicit constructions: a graph patch whose curvature data put the origin
//! on the boundary of the body, and a sequence of polytopes in R³ whose L_p
//! surface area measures converge while the bodies grow without bound.

mod highdimno;
mod oboundary;

pub use highdimno::{
    highdimno_limit_check, highdimno_polytope, LimitRow, Polytope3, Polytope3Instance,
};
pub use oboundary::{oboundary_profile, BoundaryGraphProfile, ProfileRow};

use crate::io::format_f64;

/// Comma-separated table with a header line, numbers in the shared
/// 17-significant-digit format.
pub(crate) fn csv_table<const N: usize>(
    header: [&str; N],
    rows: impl Iterator<Item = [f64; N]>,
) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(
            &row.iter()
                .map(|&x| format_f64(x))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}
