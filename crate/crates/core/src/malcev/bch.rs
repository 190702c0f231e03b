//! Truncated Baker-Campbell-Hausdorff series in Dynkin's form.
//!
//! `log(exp x exp y) = sum_k (-1)^(k-1)/k * sum [x^r1 y^s1 ... x^rk y^sk] / (|r+s| * prod r_i! s_i!)`
//! where the bracket of a word is right-nested. Collecting the inner sum by
//! word gives one rational coefficient per word in `{x, y}^d`; words whose
//! last two letters agree bracket to zero and are dropped.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgebraError, NilAlgebra, Rational, VecQ};

/// Default truncation degree, enough for every algebra of class at most 6.
pub const DEFAULT_CLASS_BOUND: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

/// One Dynkin term: right-nested bracket of `word` with its coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchTerm {
    pub word: Vec<Letter>,
    pub coeff: Rational,
}

impl BchTerm {
    pub fn degree(&self) -> usize {
        self.word.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BchTable {
    class_bound: usize,
    terms: Vec<BchTerm>,
}

pub fn default_table() -> &'static BchTable {
    static TABLE: OnceLock<BchTable> = OnceLock::new();
    TABLE.get_or_init(|| BchTable::new(DEFAULT_CLASS_BOUND))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Sum of Dynkin contributions over all ways of cutting `word` into nonempty
/// blocks of the form `x^r y^s`.
fn word_coefficient(word: &[Letter]) -> Rational {
    let d = word.len();
    let mut total = Rational::zero();
    // bit c of `cuts` set means a block boundary after position c
    for cuts in 0u64..(1u64 << (d - 1)) {
        let mut blocks = Vec::new();
        let mut start = 0;
        for c in 0..d {
            if c == d - 1 || cuts & (1 << c) != 0 {
                blocks.push(&word[start..=c]);
                start = c + 1;
            }
        }
        let mut denom = BigInt::from(d);
        let mut valid = true;
        for block in &blocks {
            let r = block.iter().take_while(|&&l| l == Letter::X).count();
            if block[r..].contains(&Letter::X) {
                valid = false;
                break;
            }
            denom *= factorial(r) * factorial(block.len() - r);
        }
        if !valid {
            continue;
        }
        let k = blocks.len();
        let sign = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        total += Rational::new(sign, denom * BigInt::from(k));
    }
    total
}

impl BchTable {
    /// Precomputes all nonvanishing Dynkin terms of degree `1..=class_bound`.
    pub fn new(class_bound: usize) -> Self {
        let mut terms = Vec::new();
        for d in 1..=class_bound {
            for bits in 0u64..(1u64 << d) {
                let word: Vec<Letter> = (0..d)
                    .map(|p| if bits & (1 << (d - 1 - p)) == 0 { Letter::X } else { Letter::Y })
                    .collect();
                if d >= 2 && word[d - 1] == word[d - 2] {
                    continue;
                }
                let coeff = word_coefficient(&word);
                if !coeff.is_zero() {
                    terms.push(BchTerm { word, coeff });
                }
            }
        }
        BchTable { class_bound, terms }
    }

    pub fn class_bound(&self) -> usize {
        self.class_bound
    }

    pub fn terms(&self) -> &[BchTerm] {
        &self.terms
    }

    pub fn terms_of_degree(&self, d: usize) -> impl Iterator<Item = &BchTerm> {
        self.terms.iter().filter(move |t| t.degree() == d)
    }

    /// `z` with `exp z = exp x exp y`, exact for algebras of class at most
    /// the table bound.
    pub fn product(&self, alg: &NilAlgebra, x: &VecQ, y: &VecQ) -> Result<VecQ, AlgebraError> {
        if alg.class() > self.class_bound {
            return Err(AlgebraError::ClassExceeded { class: alg.class(), bound: self.class_bound });
        }
        self.evaluate(alg, x, y, alg.class().max(1))
    }

    /// Sums the table's terms up to `max_degree` without any class check.
    pub fn evaluate(&self, alg: &NilAlgebra, x: &VecQ, y: &VecQ, max_degree: usize) -> Result<VecQ, AlgebraError> {
        let n = alg.dim();
        for v in [x, y] {
            if v.dim() != n {
                return Err(AlgebraError::DimensionMismatch { expected: n, found: v.dim() });
            }
        }
        let mut memo: HashMap<&[Letter], VecQ> = HashMap::new();
        let mut out = VecQ::zeros(n);
        for term in self.terms.iter().filter(|t| t.degree() <= max_degree) {
            let value = nested(alg, &term.word, x, y, &mut memo);
            out.add_scaled(&term.coeff, &value);
        }
        Ok(out)
    }
}

fn nested<'w>(
    alg: &NilAlgebra,
    word: &'w [Letter],
    x: &VecQ,
    y: &VecQ,
    memo: &mut HashMap<&'w [Letter], VecQ>,
) -> VecQ {
    if let Some(v) = memo.get(word) {
        return v.clone();
    }
    let head = if word[0] == Letter::X { x } else { y };
    let value = if word.len() == 1 {
        head.clone()
    } else {
        let tail = nested(alg, &word[1..], x, y, memo);
        if tail.is_zero() {
            tail
        } else {
            alg.bracket_unchecked(head, &tail)
        }
    };
    memo.insert(word, value.clone());
    value
}

#[cfg(test)]
mod tests {
    use super::Letter::{X, Y};
    use super::*;
    use crate::malcev::rat;

    fn coeff(table: &BchTable, word: &[Letter]) -> Rational {
        table.terms().iter().find(|t| t.word == word).map(|t| t.coeff.clone()).unwrap_or_else(Rational::zero)
    }

    #[test]
    fn low_degree_coefficients() {
        let t = BchTable::new(3);
        assert_eq!(coeff(&t, &[X]), rat(1, 1));
        assert_eq!(coeff(&t, &[Y]), rat(1, 1));
        // [x,y]/2 = [x,y]/4 - [y,x]/4
        assert_eq!(&coeff(&t, &[X, Y]) - &coeff(&t, &[Y, X]), rat(1, 2));
        // degree 3 of the classical series: [x,[x,y]]/12 - [y,[x,y]]/12
        assert_eq!(coeff(&t, &[X, X, Y]) - coeff(&t, &[X, Y, X]), rat(1, 12));
        assert_eq!(coeff(&t, &[Y, X, Y]) - coeff(&t, &[Y, Y, X]), rat(-1, 12));
    }

    #[test]
    fn heisenberg_and_filiform_products() {
        let h3 = NilAlgebra::heisenberg(1);
        let p = h3.bch(&VecQ::from_ints(&[1, 0, 0]), &VecQ::from_ints(&[0, 1, 0])).unwrap();
        assert_eq!(p, VecQ::from_ratios(&[(1, 1), (1, 1), (1, 2)]));
        let n4 = NilAlgebra::filiform(4);
        let p = n4.bch(&VecQ::unit(4, 0), &VecQ::unit(4, 1)).unwrap();
        assert_eq!(p, VecQ::from_ratios(&[(1, 1), (1, 1), (1, 2), (1, 12)]));
    }

    #[test]
    fn zero_is_identity() {
        let a = NilAlgebra::filiform(5);
        let x = VecQ::from_ratios(&[(1, 3), (-2, 1), (5, 7), (0, 1), (1, 1)]);
        assert_eq!(a.bch(&x, &VecQ::zeros(5)).unwrap(), x);
        assert_eq!(a.bch(&VecQ::zeros(5), &x).unwrap(), x);
    }

    #[test]
    fn class_bound_is_enforced() {
        let a = NilAlgebra::filiform(5);
        let small = BchTable::new(3);
        let err = a.bch_with(&small, &VecQ::zeros(5), &VecQ::zeros(5)).unwrap_err();
        assert_eq!(err, AlgebraError::ClassExceeded { class: 4, bound: 3 });
    }
}
