//! Nilmanifolds as iterated principal circle bundles.
//!
//! * [`malcev`]: exact rational nilpotent Lie algebras, BCH products and
//!   Mal'cev coordinates.
//! * [`tower`]: peeling a lattice into a tower of central circle extensions
//!   and rebuilding it from Euler cocycles.
//! * [`geometry`]: left-invariant metrics, O'Neill tensors of the circle
//!   fibrations and curvature certificates for collapsing metrics.
//! * [`formats`]: the JSON and CSV file formats used by the command line tool.

// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod formats;
pub mod geometry;
pub mod malcev;
pub mod tower;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/towers.md")]
    mod towers {}
    #[doc = include_str!("../../../book/src/curvature.md")]
    mod curvature {}
    #[doc = include_str!("../../../book/src/collapse.md")]
    mod collapse {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
