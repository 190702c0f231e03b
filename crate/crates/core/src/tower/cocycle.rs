use num_traits::{Signed, Zero};

use super::TowerError;
use crate::malcev::{NilAlgebra, Rational, StructureConstants};

/// Skew 2-form `ω(e_i, e_j)` on a base algebra: the left-invariant
/// representative of a circle bundle's Euler (extension) class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralCocycle {
    omega: Vec<Vec<Rational>>,
}

/// First failure of the cocycle identity
/// `ω([x,y],z) + ω([y,z],x) + ω([z,x],y) = 0`, oriented so that the defect
/// is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleViolation {
    pub triple: (usize, usize, usize),
    pub defect: Rational,
}

impl CentralCocycle {
    pub fn zero(dim: usize) -> Self {
        CentralCocycle { omega: vec![vec![Rational::zero(); dim]; dim] }
    }

    /// Sets `ω(e_i, e_j) = c` and `ω(e_j, e_i) = -c` for each entry.
    pub fn from_entries<I>(dim: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut w = Self::zero(dim);
        for (i, j, c) in entries {
            w.omega[j][i] = -c.clone();
            w.omega[i][j] = c;
        }
        w
    }

    /// Takes a full matrix as given, without enforcing skewness.
    pub fn from_matrix(omega: Vec<Vec<Rational>>) -> Self {
        CentralCocycle { omega }
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.omega[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.omega
    }

    /// Upper-triangle nonzero entries `(i, j, ω_ij)` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let n = self.dim();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j))).filter_map(move |(i, j)| {
            let c = &self.omega[i][j];
            (!c.is_zero()).then_some((i, j, c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.omega.iter().flatten().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        CentralCocycle { omega: self.omega.iter().map(|r| r.iter().map(|x| -x).collect()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CentralCocycle {
            omega: self.omega.iter().zip(&other.omega).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.sub(&other.neg())
    }

    pub fn check_square(&self) -> Result<(), TowerError> {
        let n = self.dim();
        if self.omega.iter().any(|r| r.len() != n) {
            return Err(TowerError::DimensionMismatch { expected: n, found: self.omega.iter().map(Vec::len).max().unwrap_or(0) });
        }
        Ok(())
    }

    pub fn check_skew(&self) -> Result<(), TowerError> {
        self.check_square()?;
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                if !(&self.omega[i][j] + &self.omega[j][i]).is_zero() {
                    return Err(TowerError::NotSkew { i, j });
                }
            }
        }
        Ok(())
    }

    /// `ω(u, v)` for `v = [e_a, e_b]` expanded in the basis.
    fn pair_with_bracket(&self, s: &StructureConstants, a: usize, b: usize, other: usize) -> Rational {
        let br = s.basis_bracket(a, b);
        br.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| c * &self.omega[k][other]).sum()
    }

    /// Chevalley-Eilenberg closedness over `base`, checked on basis triples
    /// `i < j < k`. The cyclic sum is alternating, so a negative defect is
    /// reported on the transposed triple `(i, k, j)`.
    pub fn closedness(&self, base: &StructureConstants) -> Option<CocycleViolation> {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let d = self.pair_with_bracket(base, i, j, k)
                        + self.pair_with_bracket(base, j, k, i)
                        + self.pair_with_bracket(base, k, i, j);
                    if d.is_zero() {
                        continue;
                    }
                    return Some(if d.is_negative() {
                        CocycleViolation { triple: (i, k, j), defect: -d }
                    } else {
                        CocycleViolation { triple: (i, j, k), defect: d }
                    });
                }
            }
        }
        None
    }

    /// Skewness and closedness against `base`; integrality is a property of
    /// the extension lattice and is checked by the extension itself.
    pub fn validate(&self, base: &NilAlgebra) -> Result<(), TowerError> {
        if self.dim() != base.dim() {
            return Err(TowerError::DimensionMismatch { expected: base.dim(), found: self.dim() });
        }
        self.check_skew()?;
        if let Some(v) = self.closedness(base.structure()) {
            return Err(TowerError::NotClosed { triple: v.triple, defect: v.defect });
        }
        Ok(())
    }
}
