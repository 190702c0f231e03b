use std::fmt;

use super::{AlgebraError, MalcevWord, NilAlgebra, VecQ};

/// A product of two signed generators whose second-kind coordinates are not
/// all integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeWitness {
    /// `(index, exponent)` of the left factor `exp(±e_i)`.
    pub left: (usize, i8),
    pub right: (usize, i8),
    pub product: MalcevWord,
}

impl fmt::Display for LatticeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, s) = self.left;
        let (j, t) = self.right;
        let sign = |x: i8| if x < 0 { "-" } else { "" };
        write!(f, "exp({}e{}) exp({}e{}) has second-kind coordinates ", sign(s), i + 1, sign(t), j + 1)?;
        write!(f, "{}", VecQ(self.product.exponents.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeReport {
    Closed,
    NotClosed(LatticeWitness),
}

impl LatticeReport {
    pub fn is_closed(&self) -> bool {
        matches!(self, LatticeReport::Closed)
    }
}

impl NilAlgebra {
    /// Checks that the integer second-kind points form a subgroup.
    ///
    /// Inverses of generators are trivially integral. For products it suffices
    /// to check `exp(±e_i) exp(±e_j)` for all ordered pairs: these give the
    /// polycyclic presentation relations, and collection in an adapted basis
    /// then keeps every word integral.
    pub fn lattice_closed(&self) -> Result<LatticeReport, AlgebraError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for (s, t) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
                    let mut a = vec![0i64; n];
                    a[i] = s.into();
                    let mut b = vec![0i64; n];
                    b[j] = t.into();
                    let product = self.multiply_second_kind(&MalcevWord::from_ints(&a), &MalcevWord::from_ints(&b))?;
                    if !product.is_lattice() {
                        return Ok(LatticeReport::NotClosed(LatticeWitness { left: (i, s), right: (j, t), product }));
                    }
                }
            }
        }
        Ok(LatticeReport::Closed)
    }
}
