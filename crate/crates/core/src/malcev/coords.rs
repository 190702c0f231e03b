use super::{AlgebraError, NilAlgebra, Rational, VecQ};

/// Which chart a coordinate vector is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordKind {
    /// `exp(v_1 e_1 + ... + v_n e_n)`
    First,
    /// `exp(a_1 e_1) exp(a_2 e_2) ... exp(a_n e_n)`
    Second,
}

/// Second-kind (Mal'cev) coordinates of a group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MalcevWord {
    pub exponents: Vec<Rational>,
}

impl MalcevWord {
    pub fn new(exponents: Vec<Rational>) -> Self {
        MalcevWord { exponents }
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        MalcevWord::new(VecQ::from_ints(xs).0)
    }

    /// Integral exponents: the element lies in the standard lattice.
    pub fn is_lattice(&self) -> bool {
        self.exponents.iter().all(|a| a.is_integer())
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }
}

impl NilAlgebra {
    /// First-kind to second-kind coordinates.
    ///
    /// Peels one factor at a time: with `w` in the ideal `span(e_p, ..., e_n)`,
    /// `a_p = w_p` and `exp(-a_p e_p) exp(w)` lies in the next ideal.
    pub fn to_second_kind(&self, v: &VecQ) -> Result<MalcevWord, AlgebraError> {
        let n = self.dim();
        if v.dim() != n {
            return Err(AlgebraError::DimensionMismatch { expected: n, found: v.dim() });
        }
        self.check_adapted()?;
        let mut w = v.clone();
        let mut exps = Vec::with_capacity(n);
        for p in 0..n {
            let a = w[p].clone();
            let factor = VecQ::unit(n, p).scale(&-a.clone());
            w = self.bch(&factor, &w)?;
            debug_assert!(w.iter().take(p + 1).all(|c| *c == Rational::from_integer(0.into())));
            exps.push(a);
        }
        Ok(MalcevWord::new(exps))
    }

    /// Second-kind to first-kind coordinates: the ordered product of the
    /// one-parameter factors.
    pub fn from_second_kind(&self, word: &MalcevWord) -> Result<VecQ, AlgebraError> {
        let n = self.dim();
        if word.dim() != n {
            return Err(AlgebraError::DimensionMismatch { expected: n, found: word.dim() });
        }
        self.check_adapted()?;
        let mut acc = VecQ::zeros(n);
        for (p, a) in word.exponents.iter().enumerate() {
            acc = self.bch(&acc, &VecQ::unit(n, p).scale(a))?;
        }
        Ok(acc)
    }

    /// Product of two lattice-chart elements, in second-kind coordinates.
    pub fn multiply_second_kind(&self, a: &MalcevWord, b: &MalcevWord) -> Result<MalcevWord, AlgebraError> {
        let x = self.from_second_kind(a)?;
        let y = self.from_second_kind(b)?;
        self.to_second_kind(&self.bch(&x, &y)?)
    }

    pub fn inverse_second_kind(&self, a: &MalcevWord) -> Result<MalcevWord, AlgebraError> {
        let x = self.from_second_kind(a)?;
        self.to_second_kind(&-&x)
    }
}
