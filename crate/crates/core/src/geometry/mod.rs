//! Left-invariant Riemannian geometry of nilpotent Lie groups and of the
//! circle fibrations in a bundle tower.
//!
//! Everything is evaluated at the identity in the left-invariant frame: the
//! curvature of a left-invariant metric is constant there, so pointwise
//! identities are exact statements about the whole manifold.
//!
//! Curvature follows the sign convention `R(X, Y) = ∇_[X,Y] - [∇_X, ∇_Y]`,
//! under which the sectional curvature of an orthonormal pair is
//! `K(X, Y) = <R(X, Y) X, Y>` and the O'Neill formulas take their usual form.

mod brackets;
mod certify;
mod connection;
mod fibration;
mod metric;
mod oneill;
mod sampling;
mod scan;
mod variation;

pub use brackets::Brackets;
pub use certify::{
    certify_almost_flat, diameter_bound, flag_fiber_lengths, tower_metric, CertifyOptions, FlatnessCertificate, LevelCertificate,
};
pub use connection::{CurvatureTensor, LeftInvariantGeometry, LeviCivita};
pub use fibration::{BaseQuotient, CircleFibration, DecompositionDefects, VariedFibration};
pub use metric::LeftInvariantMetric;
pub use oneill::OneillTensors;
pub use sampling::{PlaneSample, SampleStream};
pub use scan::{geometric_grid, lemma_scan, BoundConstant, DecayReport};
pub use variation::{CanonicalVariation, SubmersionSplit};

use thiserror::Error;

/// Tolerance below which a plane's Gram determinant counts as degenerate.
pub const DEGENERATE_GRAM: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("metric matrix is not symmetric")]
    NotSymmetric,
    #[error("metric matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("degenerate plane (Gram determinant {gram:e})")]
    DegeneratePlane { gram: f64 },
    #[error("fiber scale t must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("vertical direction is zero")]
    ZeroVertical,
    #[error("vertical direction is not central: bracket with e{} has norm {norm:e}", .index + 1)]
    VerticalNotCentral { index: usize, norm: f64 },
    #[error("invalid t grid: {0}")]
    InvalidGrid(String),
    #[error("curvature bound violated at t = {t:e}, sample {sample}: |K| = {k:e} > {bound:e}")]
    BoundViolated { t: f64, sample: u64, k: f64, bound: f64 },
    #[error("curvature budget {eps:e} not met after {rounds} refinement rounds (sampled sup {achieved:e})")]
    BudgetNotMet { eps: f64, achieved: f64, rounds: usize },
}
