use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CentralCocycle, NilLattice, TowerError};
use crate::malcev::{int, LatticeReport, MalcevWord, NilAlgebra, Rational, StructureConstants};

/// The central lattice vector whose one-parameter subgroup is collapsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelChoice {
    pub z: Vec<BigInt>,
}

impl PeelChoice {
    pub fn is_primitive(&self) -> bool {
        let g = self.z.iter().fold(BigInt::zero(), |g, x| num_integer::gcd(g, x.clone()));
        g.is_one()
    }

    /// Index `p` with `z = e_p`, if `z` is a basis vector.
    pub fn basis_index(&self) -> Option<usize> {
        let nonzero: Vec<usize> = (0..self.z.len()).filter(|&i| !self.z[i].is_zero()).collect();
        match nonzero.as_slice() {
            [p] if self.z[*p].is_one() => Some(*p),
            _ => None,
        }
    }
}

/// One principal circle bundle `total -> base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerStep {
    pub total: NilLattice,
    pub base: NilLattice,
    pub choice: PeelChoice,
    pub cocycle: CentralCocycle,
}

/// Steps listed top-down, from the given lattice to the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleTower {
    pub steps: Vec<TowerStep>,
}

impl BundleTower {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The lattice at the top of the tower (the point for an empty tower).
    pub fn top(&self) -> NilLattice {
        self.steps.first().map(|s| s.total.clone()).unwrap_or_else(NilLattice::point)
    }

    /// Rebuilds the top lattice from the bottom by successive extensions.
    pub fn rebuild(&self) -> Result<NilLattice, TowerError> {
        let mut acc = NilLattice::point();
        for step in self.steps.iter().rev() {
            acc = acc.extend_by_cocycle(&step.cocycle)?;
        }
        Ok(acc)
    }
}

impl NilLattice {
    /// Deterministic generator of `R ∩ Γ`: the last vector of the Hermite
    /// basis of the central lattice.
    ///
    /// In an adapted basis `e_n` is central, and a saturated lattice containing
    /// `e_n` always has `e_n` as the last Hermite row, so the choice is `e_n`.
    pub fn pick_primitive_central(&self) -> Option<PeelChoice> {
        self.group_center().pop().map(|z| PeelChoice { z })
    }

    /// Collapses the circle `exp(R z) / exp(Z z)`.
    pub fn peel_step(&self) -> Result<TowerStep, TowerError> {
        let n = self.dim();
        let choice = self.pick_primitive_central().ok_or(TowerError::PeelPoint)?;
        assert_eq!(choice.basis_index(), Some(n - 1), "adapted basis always peels along e_n");
        let alg = self.algebra();
        let base = NilLattice::new(alg.quotient_by_last())?;
        let cocycle = CentralCocycle::from_entries(
            n - 1,
            alg.entries().filter(|&(_, _, k, _)| k == n - 1).map(|(i, j, _, c)| (i, j, c.clone())),
        );
        Ok(TowerStep { total: self.clone(), base, choice, cocycle })
    }

    pub fn peel_tower(&self) -> BundleTower {
        let mut steps = Vec::with_capacity(self.dim());
        let mut current = self.clone();
        while current.dim() > 0 {
            let step = current.peel_step().expect("nonzero dimension");
            current = step.base.clone();
            steps.push(step);
        }
        BundleTower { steps }
    }

    /// The central extension `0 -> Z -> Γ~ -> Γ -> 1` with new bracket
    /// `[x, y] + ω(x, y) z`, `z` appended as the last basis vector.
    pub fn extend_by_cocycle(&self, w: &CentralCocycle) -> Result<NilLattice, TowerError> {
        let base = self.algebra();
        w.validate(base)?;
        let n = base.dim();
        let entries = base
            .entries()
            .map(|(i, j, k, c)| (i, j, k, c.clone()))
            .chain(w.entries().map(|(i, j, c)| (i, j, n, c.clone())));
        let structure = StructureConstants::new(n + 1, entries)?;
        let algebra = NilAlgebra::with_inferred_class(structure)?;
        match algebra.lattice_closed()? {
            LatticeReport::Closed => Ok(NilLattice::new(algebra)?),
            LatticeReport::NotClosed(witness) => Err(TowerError::NotIntegral(witness)),
        }
    }

    /// Group-level extension cocycle of the zero section `s`:
    /// `s(a) s(b) = s(ab) z^f(a, b)`, for `a, b` in the base lattice `Γ/⟨z⟩`.
    pub fn section_defect(&self, a: &MalcevWord, b: &MalcevWord) -> Result<Rational, TowerError> {
        let n = self.dim();
        if n == 0 {
            return Err(TowerError::PeelPoint);
        }
        let lift = |w: &MalcevWord| {
            let mut e = w.exponents.clone();
            e.push(int(0));
            MalcevWord::new(e)
        };
        let product = self.algebra().multiply_second_kind(&lift(a), &lift(b))?;
        Ok(product.exponents[n - 1].clone())
    }
}
