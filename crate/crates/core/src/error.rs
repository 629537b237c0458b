use thiserror::Error;

/// Errors produced by the geometry kernel, the measure layer, the solvers and
/// the generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("half-plane constraints are inconsistent (empty body)")]
    EmptyBody,
    #[error("normals fit in an open semicircle (unbounded body)")]
    Unbounded,
    #[error("body is degenerate (area {area:e})")]
    Degenerate { area: f64 },
    #[error("duplicate normal at angle {theta}")]
    DuplicateNormal { theta: f64 },

    #[error("origin lies outside the body (support number {support:e} at normal {index})")]
    OriginOutside { index: usize, support: f64 },
    #[error("facet {facet} is not planar (deviation {deviation:e})")]
    NonPlanarFacet { facet: usize, deviation: f64 },
    #[error("measure has no mass")]
    EmptyMeasure,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("point lies outside the body (slack {slack:e} at normal {index})")]
    XiOutside { index: usize, slack: f64 },
    #[error("measure is concentrated on a closed semicircle; no interior maximizer")]
    NoInteriorMax,
    #[error("iteration limit {0} exceeded")]
    MaxItersExceeded(usize),
    #[error("measure is concentrated on a closed semicircle")]
    Concentrated,
    #[error("measure is not invariant under {group}")]
    NotSymmetric { group: String },
    #[error("normal set is not closed under {group}")]
    NotClosedUnderG { group: String },
    #[error("no convergence (best residual {best_residual:e})")]
    NoConvergence { best_residual: f64 },

    #[error(
        "support of the measure is a pair of antipodal vectors; no convex body has this \
         L_p surface area measure"
    )]
    AntipodalPair,
    #[error("cannot choose a subdivision base point avoiding all atoms")]
    CannotAvoidAtoms,
    #[error("invalid exponent: {0}")]
    InvalidP(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_p_open(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidP(format!("p = {p} must lie in (0, 1)")))
    }
}
