use num_bigint::BigInt;
use num_traits::Zero;

use super::intmat::{solve_integer, IntMatrix, Obstruction};
use super::{CentralCocycle, NilLattice, TowerError};
use crate::malcev::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CohomologySign {
    /// `w1 - w2 = δλ`
    Same,
    /// `w1 + w2 = δλ`: the classes agree after reversing the fiber orientation.
    Opposite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cohomology {
    /// `λ` is an integral 1-cochain with `δλ(x, y) = -λ([x, y])` equal to the
    /// difference (or sum) of the two cocycles.
    Cohomologous { sign: CohomologySign, lambda: Vec<BigInt> },
    /// Certificates for each tested sign.
    Distinct { obstructions: Vec<Obstruction> },
}

impl Cohomology {
    pub fn is_cohomologous(&self) -> bool {
        matches!(self, Cohomology::Cohomologous { .. })
    }
}

/// The integer system `-sum_k c_ijk λ_k = rhs_ij` over pairs `i < j`, each
/// row scaled by the lcm of its denominators.
pub(crate) fn coboundary_system(base: &NilLattice, rhs: &CentralCocycle) -> (IntMatrix, Vec<BigInt>) {
    let n = base.dim();
    let s = base.algebra().structure();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let row: Vec<Rational> = (0..n).map(|k| -s.coeff(i, j, k)).collect();
            let r = rhs.get(i, j).clone();
            let lcm = row
                .iter()
                .chain(std::iter::once(&r))
                .fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            let scale = Rational::from_integer(lcm);
            a.push(row.iter().map(|x| (x * &scale).to_integer()).collect());
            b.push((r * &scale).to_integer());
        }
    }
    (a, b)
}

/// `δλ` for an integral 1-cochain `λ`.
pub fn coboundary(base: &NilLattice, lambda: &[BigInt]) -> CentralCocycle {
    let n = base.dim();
    let s = base.algebra().structure();
    let entries = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| {
        let v: Rational = (0..n).map(|k| -s.coeff(i, j, k) * Rational::from_integer(lambda[k].clone())).sum();
        (i, j, v)
    });
    CentralCocycle::from_entries(n, entries)
}

impl NilLattice {
    /// Decides whether `w1` and `w2` define the same extension class over
    /// this lattice with a fixed identification of bases, optionally up to
    /// the sign of the fiber.
    pub fn cocycles_cohomologous(
        &self,
        w1: &CentralCocycle,
        w2: &CentralCocycle,
        up_to_sign: bool,
    ) -> Result<Cohomology, TowerError> {
        w1.validate(self.algebra())?;
        w2.validate(self.algebra())?;
        let n = self.dim();
        let mut attempts = vec![(CohomologySign::Same, w1.sub(w2))];
        if up_to_sign {
            attempts.push((CohomologySign::Opposite, w1.add(w2)));
        }
        let mut obstructions = Vec::new();
        for (sign, target) in attempts {
            if n < 2 {
                // no pairs: every cocycle is zero
                return Ok(Cohomology::Cohomologous { sign, lambda: vec![BigInt::zero(); n] });
            }
            let (a, b) = coboundary_system(self, &target);
            match solve_integer(&a, &b, n) {
                Ok(lambda) => return Ok(Cohomology::Cohomologous { sign, lambda }),
                Err(obs) => obstructions.push(obs),
            }
        }
        Ok(Cohomology::Distinct { obstructions })
    }
}
