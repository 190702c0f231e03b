//! Named algebras and lattices used throughout the tests, docs and data files.

use crate::malcev::{int, NilAlgebra, StructureConstants};
use crate::tower::NilLattice;

fn algebra(dim: usize, brackets: &[(usize, usize, usize, i64)]) -> NilAlgebra {
    let s = StructureConstants::new(dim, brackets.iter().map(|&(i, j, k, c)| (i - 1, j - 1, k - 1, int(c))))
        .expect("catalog indices are in range");
    NilAlgebra::with_inferred_class(s).expect("catalog algebras are valid")
}

/// `[e1, e2] = e3`.
pub fn h3() -> NilAlgebra {
    NilAlgebra::heisenberg(1)
}

/// `[e1, e3] = e5`, `[e2, e4] = e5`.
pub fn h5() -> NilAlgebra {
    NilAlgebra::heisenberg(2)
}

/// Standard filiform `[e1, e2] = e3`, `[e1, e3] = e4`.
pub fn n4() -> NilAlgebra {
    NilAlgebra::filiform(4)
}

/// Class-4 filiform algebra of dimension 5.
pub fn filiform5() -> NilAlgebra {
    NilAlgebra::filiform(5)
}

/// `h3 ⊕ R`, with the abelian factor last.
pub fn h3_times_r() -> NilAlgebra {
    algebra(4, &[(1, 2, 3, 1)])
}

/// Filiform lattice `[e1, e2] = e3`, `[e1, e3] = 2 e4`.
///
/// With unit constants `exp(e2) exp(e1) = exp(e1) exp(e2) exp(-e3) exp(e4/2)`,
/// so the integer points of [`n4`] are not closed; doubling the last
/// constant is the smallest integral rescaling that is.
pub fn n4_lattice_algebra() -> NilAlgebra {
    algebra(4, &[(1, 2, 3, 1), (1, 3, 4, 2)])
}

pub fn h3_lattice() -> NilLattice {
    NilLattice::new(h3()).expect("integer Heisenberg lattice")
}

pub fn h5_lattice() -> NilLattice {
    NilLattice::new(h5()).expect("integer Heisenberg lattice")
}

pub fn n4_lattice() -> NilLattice {
    NilLattice::new(n4_lattice_algebra()).expect("doubled filiform lattice")
}

pub fn h3_times_z() -> NilLattice {
    NilLattice::new(h3_times_r()).expect("product lattice")
}

pub fn torus(n: usize) -> NilLattice {
    NilLattice::torus(n)
}
