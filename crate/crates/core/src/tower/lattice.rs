use num_bigint::BigInt;
use num_traits::Zero;

use super::intmat::{hermite_rows, integer_kernel};
use crate::malcev::{AlgebraError, LatticeReport, NilAlgebra, Rational};

/// A nilpotent algebra whose integer second-kind points form a lattice `Γ`
/// in `N = exp(n)`; stands for both `Γ` and the nilmanifold `N/Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilLattice {
    algebra: NilAlgebra,
}

impl NilLattice {
    pub fn new(algebra: NilAlgebra) -> Result<Self, AlgebraError> {
        match algebra.lattice_closed()? {
            LatticeReport::Closed => Ok(NilLattice { algebra }),
            LatticeReport::NotClosed(w) => Err(AlgebraError::LatticeNotClosed(w)),
        }
    }

    pub fn point() -> Self {
        NilLattice { algebra: NilAlgebra::point() }
    }

    /// `Z^n`, the torus.
    pub fn torus(n: usize) -> Self {
        NilLattice { algebra: NilAlgebra::abelian(n) }
    }

    pub fn algebra(&self) -> &NilAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Basis of the central lattice `Z(n) ∩ Z^n` as primitive integer
    /// vectors in row Hermite form (pivots positive, so each vector's first
    /// nonzero entry is positive).
    pub fn group_center(&self) -> Vec<Vec<BigInt>> {
        let n = self.dim();
        let s = self.algebra.structure();
        let mut rows = Vec::new();
        for j in 0..n {
            for k in 0..n {
                let row: Vec<Rational> = (0..n).map(|i| s.coeff(i, j, k)).collect();
                if row.iter().all(Zero::is_zero) {
                    continue;
                }
                let lcm = row.iter().fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
                rows.push(row.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect());
            }
        }
        let kernel = integer_kernel(&rows, n);
        hermite_rows(kernel, n).0
    }
}
