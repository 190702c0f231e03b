use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;

/// Exact vector in the algebra basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VecQ(pub Vec<Rational>);

impl VecQ {
    pub fn zeros(n: usize) -> Self {
        VecQ(vec![Rational::zero(); n])
    }

    /// The basis vector `e_{index+1}`.
    pub fn unit(n: usize, index: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[index] = Rational::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        VecQ(xs.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn from_ratios(xs: &[(i64, i64)]) -> Self {
        VecQ(xs.iter().map(|&(n, d)| Rational::new(n.into(), d.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VecQ(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &VecQ) {
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            *x += c * y;
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl Index<usize> for VecQ {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for VecQ {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl Add for &VecQ {
    type Output = VecQ;
    fn add(self, rhs: &VecQ) -> VecQ {
        VecQ(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &VecQ {
    type Output = VecQ;
    fn sub(self, rhs: &VecQ) -> VecQ {
        VecQ(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &VecQ {
    type Output = VecQ;
    fn neg(self) -> VecQ {
        VecQ(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for VecQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}
