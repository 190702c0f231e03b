//! Exact arithmetic for rational nilpotent Lie algebras.
//!
//! A [`NilAlgebra`] is a finite-dimensional nilpotent Lie algebra given by
//! structure constants in a Mal'cev-adapted basis `e_1, ..., e_n`: every tail
//! `span(e_k, ..., e_n)` is an ideal. Elements of the simply connected group
//! `N = exp(n)` are written in exponential (first-kind) coordinates as a
//! [`VecQ`], and the group law is the truncated Baker-Campbell-Hausdorff
//! product in [`bch`]. Second-kind coordinates ([`MalcevWord`]) are used only
//! where the lattice of integer points is concerned.

mod algebra;
pub mod bch;
mod coords;
mod lattice;
pub mod linalg;
mod vector;

pub use algebra::{JacobiReport, LowerCentralSeries, NilAlgebra, StructureConstants};
pub use bch::BchTable;
pub use coords::{CoordKind, MalcevWord};
pub use lattice::{LatticeReport, LatticeWitness};
pub use vector::VecQ;

use thiserror::Error;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Builds a rational from a small numerator and denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Builds an integral rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket [e{i},e{j}] listed with i >= j")]
    UnorderedPair { i: usize, j: usize },
    #[error("Jacobi identity fails at (e{}, e{}, e{}) with defect {defect}", .triple.0 + 1, .triple.1 + 1, .triple.2 + 1)]
    Jacobi { triple: (usize, usize, usize), defect: VecQ },
    #[error("not nilpotent: lower central series stabilizes at dimension {stable_dim}")]
    NotNilpotent { stable_dim: usize },
    #[error("declared nilpotency class {declared}, actual class {actual}")]
    ClassMismatch { declared: usize, actual: usize },
    #[error("basis not Mal'cev adapted: [e{},e{}] has a component along e{}", .i + 1, .j + 1, .k + 1)]
    BasisNotAdapted { i: usize, j: usize, k: usize },
    #[error("nilpotency class {class} exceeds BCH table bound {bound}")]
    ClassExceeded { class: usize, bound: usize },
    #[error("integer second-kind points are not closed under multiplication: {0}")]
    LatticeNotClosed(LatticeWitness),
}
