//! Nilmanifolds as towers of principal circle bundles.
//!
//! Peeling: a primitive central lattice vector `z` spans a one-parameter
//! central subgroup `R`; `R / (R ∩ Γ)` acts freely on `N/Γ` and the quotient
//! is again a nilmanifold, of one dimension less. The extension class of each
//! step is recorded as a left-invariant (Chevalley-Eilenberg) 2-cocycle on the
//! base algebra. Rebuilding reverses the step: a closed integral cocycle `ω`
//! on a base lattice gives the central extension `[x, y] + ω(x, y) z`.

mod cocycle;
mod cohomology;
pub mod intmat;
mod lattice;
mod peel;

pub use cocycle::{CentralCocycle, CocycleViolation};
pub use cohomology::{coboundary, Cohomology, CohomologySign};
pub use intmat::Obstruction;
pub use lattice::NilLattice;
pub use peel::{BundleTower, PeelChoice, TowerStep};

use thiserror::Error;

use crate::malcev::{AlgebraError, LatticeWitness, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TowerError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("cocycle has size {found}, base has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cocycle is not skew: ω(e{},e{}) + ω(e{},e{}) != 0", .i + 1, .j + 1, .j + 1, .i + 1)]
    NotSkew { i: usize, j: usize },
    #[error("cocycle is not closed at (e{}, e{}, e{}): defect {defect}", .triple.0 + 1, .triple.1 + 1, .triple.2 + 1)]
    NotClosed { triple: (usize, usize, usize), defect: Rational },
    #[error("extension lattice is not closed: {0}")]
    NotIntegral(LatticeWitness),
    #[error("the point has no circle bundle structure to peel")]
    PeelPoint,
}

#[cfg(test)]
mod tests;
