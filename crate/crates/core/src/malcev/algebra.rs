use std::collections::BTreeMap;
use std::ops::Deref;

use num_traits::Zero;

use super::bch::{default_table, BchTable};
use super::linalg::{null_space, span_basis};
use super::{AlgebraError, Rational, VecQ};

/// Raw structure constants `[e_i, e_j] = sum_k c_ijk e_k`, stored for `i < j`.
///
/// No Lie-algebra axioms are assumed. Use [`NilAlgebra::new`] for a
/// validated algebra; the checks themselves live here so that invalid input
/// can be diagnosed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    // (i, j) with i < j  ->  nonzero coefficients (k, c)
    table: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

/// Outcome of [`StructureConstants::check_jacobi`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JacobiReport {
    Ok,
    /// Lexicographically first basis triple `i < j < k` with nonzero
    /// `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`.
    Violation { triple: (usize, usize, usize), defect: VecQ },
}

impl JacobiReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, JacobiReport::Ok)
    }
}

/// `g = g_1 ⊇ g_2 = [g, g] ⊇ ... ⊇ 0`, each term as a row-reduced basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerCentralSeries {
    pub terms: Vec<Vec<VecQ>>,
    pub class: usize,
}

impl LowerCentralSeries {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Vec::len).collect()
    }
}

impl StructureConstants {
    /// Zero bracket on `dim` generators.
    pub fn abelian(dim: usize) -> Self {
        StructureConstants { dim, table: BTreeMap::new() }
    }

    /// Builds the table from `(i, j, k, c)` entries meaning `[e_i, e_j]` has
    /// coefficient `c` on `e_k`. Indices are zero-based and `i < j` is
    /// required; repeated entries are summed.
    pub fn new<I>(dim: usize, entries: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rational)>,
    {
        let mut dense: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
        for (i, j, k, c) in entries {
            for index in [i, j, k] {
                if index >= dim {
                    return Err(AlgebraError::IndexOutOfRange { index: index + 1, dim });
                }
            }
            if i >= j {
                return Err(AlgebraError::UnorderedPair { i: i + 1, j: j + 1 });
            }
            *dense.entry((i, j)).or_default().entry(k).or_insert_with(Rational::zero) += c;
        }
        let table = dense
            .into_iter()
            .map(|(pair, row)| (pair, row.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>()))
            .filter(|(_, row)| !row.is_empty())
            .collect();
        Ok(StructureConstants { dim, table })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero entries `(i, j, k, c)` with `i < j`, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        self.table
            .iter()
            .flat_map(|(&(i, j), row)| row.iter().map(move |(k, c)| (i, j, *k, c)))
    }

    pub fn is_abelian(&self) -> bool {
        self.table.is_empty()
    }

    /// Coefficient of `e_k` in `[e_i, e_j]`, for any ordering of `i, j`.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Rational {
        let (a, b, sign) = if i < j { (i, j, false) } else { (j, i, true) };
        let c = self
            .table
            .get(&(a, b))
            .and_then(|row| row.iter().find(|(kk, _)| *kk == k))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero);
        if sign {
            -c
        } else {
            c
        }
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> VecQ {
        self.bracket_unchecked(&VecQ::unit(self.dim, i), &VecQ::unit(self.dim, j))
    }

    /// `[x, y]`, checking dimensions.
    pub fn bracket(&self, x: &VecQ, y: &VecQ) -> Result<VecQ, AlgebraError> {
        for v in [x, y] {
            if v.dim() != self.dim {
                return Err(AlgebraError::DimensionMismatch { expected: self.dim, found: v.dim() });
            }
        }
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &VecQ, y: &VecQ) -> VecQ {
        let mut out = VecQ::zeros(self.dim);
        for (&(i, j), row) in &self.table {
            let w = &x[i] * &y[j] - &x[j] * &y[i];
            if w.is_zero() {
                continue;
            }
            for (k, c) in row {
                out[*k] += &w * c;
            }
        }
        out
    }

    pub fn check_jacobi(&self) -> JacobiReport {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (VecQ::unit(n, i), VecQ::unit(n, j), VecQ::unit(n, k));
                    let a = self.bracket_unchecked(&ei, &self.basis_bracket(j, k));
                    let b = self.bracket_unchecked(&ej, &self.basis_bracket(k, i));
                    let c = self.bracket_unchecked(&ek, &self.basis_bracket(i, j));
                    let defect = &(&a + &b) + &c;
                    if !defect.is_zero() {
                        return JacobiReport::Violation { triple: (i, j, k), defect };
                    }
                }
            }
        }
        JacobiReport::Ok
    }

    /// `[g, V]` for a subspace `V` given by a basis.
    fn bracket_with_algebra(&self, space: &[VecQ]) -> Vec<VecQ> {
        let n = self.dim;
        let mut gens = Vec::new();
        for i in 0..n {
            let ei = VecQ::unit(n, i);
            for v in space {
                let b = self.bracket_unchecked(&ei, v);
                if !b.is_zero() {
                    gens.push(b.0);
                }
            }
        }
        span_basis(gens, n).into_iter().map(VecQ).collect()
    }

    pub fn lower_central_series(&self) -> Result<LowerCentralSeries, AlgebraError> {
        let n = self.dim;
        let mut terms = vec![(0..n).map(|i| VecQ::unit(n, i)).collect::<Vec<_>>()];
        while !terms.last().unwrap().is_empty() {
            let last = terms.last().unwrap();
            let next = self.bracket_with_algebra(last);
            if next.len() == last.len() {
                return Err(AlgebraError::NotNilpotent { stable_dim: next.len() });
            }
            terms.push(next);
        }
        let class = terms.len() - 1;
        Ok(LowerCentralSeries { terms, class })
    }

    /// Basis of the center `{x : [x, y] = 0 for all y}`.
    pub fn center(&self) -> Vec<VecQ> {
        let n = self.dim;
        // rows: coefficient of e_k in [x, e_j] as a linear form in x
        let mut rows = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                let row: Vec<Rational> = (0..n).map(|i| self.coeff(i, j, k)).collect();
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        null_space(rows, n).into_iter().map(VecQ).collect()
    }

    /// Checks that `[e_i, e_j]` lies in `span(e_{j+1}, ..., e_n)` for `i < j`.
    ///
    /// For a nilpotent algebra this is equivalent to every tail span being an
    /// ideal, since `g` acts nilpotently (hence trivially) on each
    /// one-dimensional quotient of the flag.
    pub fn check_adapted(&self) -> Result<(), AlgebraError> {
        for (i, j, k, _) in self.entries() {
            if k <= j {
                return Err(AlgebraError::BasisNotAdapted { i, j, k });
            }
        }
        Ok(())
    }
}

/// A validated nilpotent Lie algebra in a Mal'cev-adapted basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilAlgebra {
    structure: StructureConstants,
    class: usize,
}

impl Deref for NilAlgebra {
    type Target = StructureConstants;
    fn deref(&self) -> &StructureConstants {
        &self.structure
    }
}

impl NilAlgebra {
    /// Validates Jacobi, nilpotency with the declared class, and adaptedness.
    pub fn new(structure: StructureConstants, declared_class: usize) -> Result<Self, AlgebraError> {
        let alg = Self::with_inferred_class(structure)?;
        if alg.class != declared_class {
            return Err(AlgebraError::ClassMismatch { declared: declared_class, actual: alg.class });
        }
        Ok(alg)
    }

    /// Same checks as [`NilAlgebra::new`], taking the class from the lower
    /// central series.
    pub fn with_inferred_class(structure: StructureConstants) -> Result<Self, AlgebraError> {
        if let JacobiReport::Violation { triple, defect } = structure.check_jacobi() {
            return Err(AlgebraError::Jacobi { triple, defect });
        }
        let lcs = structure.lower_central_series()?;
        structure.check_adapted()?;
        Ok(NilAlgebra { structure, class: lcs.class })
    }

    /// The zero-dimensional algebra: the Lie algebra of a point.
    pub fn point() -> Self {
        NilAlgebra { structure: StructureConstants::abelian(0), class: 0 }
    }

    pub fn abelian(dim: usize) -> Self {
        NilAlgebra { structure: StructureConstants::abelian(dim), class: usize::from(dim > 0) }
    }

    /// Heisenberg algebra of dimension `2m + 1`: `[e_i, e_{m+i}] = e_{2m+1}`.
    pub fn heisenberg(m: usize) -> Self {
        let n = 2 * m + 1;
        let entries = (0..m).map(|i| (i, m + i, n - 1, super::int(1)));
        Self::with_inferred_class(StructureConstants::new(n, entries).expect("valid indices"))
            .expect("Heisenberg algebra is nilpotent")
    }

    /// Standard filiform algebra of dimension `n >= 2`: `[e_1, e_j] = e_{j+1}`
    /// for `2 <= j < n`.
    pub fn filiform(n: usize) -> Self {
        let entries = (1..n.saturating_sub(1)).map(|j| (0, j, j + 1, super::int(1)));
        Self::with_inferred_class(StructureConstants::new(n, entries).expect("valid indices"))
            .expect("filiform algebra is nilpotent")
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }

    pub fn class(&self) -> usize {
        self.class
    }

    /// Group law in first-kind coordinates, using the shared default table.
    pub fn bch(&self, x: &VecQ, y: &VecQ) -> Result<VecQ, AlgebraError> {
        self.bch_with(default_table(), x, y)
    }

    pub fn bch_with(&self, table: &BchTable, x: &VecQ, y: &VecQ) -> Result<VecQ, AlgebraError> {
        table.product(self, x, y)
    }

    /// Quotient by `span(e_n)`, the last basis vector, which is central in an
    /// adapted basis.
    pub fn quotient_by_last(&self) -> NilAlgebra {
        let n = self.dim();
        assert!(n > 0, "the point has no quotient");
        let entries = self
            .entries()
            .filter(|&(_, _, k, _)| k < n - 1)
            .map(|(i, j, k, c)| (i, j, k, c.clone()));
        let structure = StructureConstants::new(n - 1, entries).expect("indices stay in range");
        Self::with_inferred_class(structure).expect("quotient of an adapted nilpotent algebra is adapted")
    }
}
