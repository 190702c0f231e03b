use nalgebra::{DMatrix, DVector};

use crate::malcev::{NilAlgebra, StructureConstants};

/// Structure constants in floating point, stored densely and antisymmetrically.
#[derive(Debug, Clone, PartialEq)]
pub struct Brackets {
    n: usize,
    c: Vec<f64>,
}

impl Brackets {
    pub fn zero(n: usize) -> Self {
        Brackets { n, c: vec![0.0; n * n * n] }
    }

    pub fn from_structure(s: &StructureConstants) -> Self {
        use num_traits::ToPrimitive;
        let mut b = Self::zero(s.dim());
        for (i, j, k, c) in s.entries() {
            b.set(i, j, k, c.to_f64().expect("finite structure constant"));
        }
        b
    }

    pub fn from_algebra(a: &NilAlgebra) -> Self {
        Self::from_structure(a.structure())
    }

    /// Sets `[e_i, e_j]_k = c` and `[e_j, e_i]_k = -c`.
    pub fn set(&mut self, i: usize, j: usize, k: usize, c: f64) {
        let n = self.n;
        self.c[(i * n + j) * n + k] = c;
        self.c[(j * n + i) * n + k] = -c;
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.n + j) * self.n + k]
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.n;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                let base = (i * n + j) * n;
                for k in 0..n {
                    out[k] += w * self.c[base + k];
                }
            }
        }
        out
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> DVector<f64> {
        let n = self.n;
        DVector::from_iterator(n, (0..n).map(|k| self.coeff(i, j, k)))
    }

    /// Largest `|[z, e_i]|` over basis vectors (Euclidean norm), with its index.
    pub fn centrality_defect(&self, z: &DVector<f64>) -> (usize, f64) {
        (0..self.n)
            .map(|i| (i, self.bracket(z, &DVector::from_fn(self.n, |k, _| f64::from(u8::from(k == i)))).norm()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
    }

    /// Quotient by the central line `span(z)`.
    ///
    /// The basis of the quotient is the image of `e_i` for `i != p`, where
    /// `p` is the last index with `z_p != 0`. Returns the quotient brackets and
    /// the projection matrix (size `(n-1) x n`).
    pub fn quotient(&self, z: &DVector<f64>) -> (Brackets, DMatrix<f64>) {
        let n = self.n;
        let scale = z.amax();
        let p = (0..n).rev().find(|&i| z[i].abs() > 1e-12 * scale).expect("nonzero vertical direction");
        let keep: Vec<usize> = (0..n).filter(|&i| i != p).collect();
        let mut proj = DMatrix::zeros(n - 1, n);
        for (a, &i) in keep.iter().enumerate() {
            proj[(a, i)] = 1.0;
            proj[(a, p)] = -z[i] / z[p];
        }
        let mut q = Brackets::zero(n - 1);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a + 1) {
                let img = &proj * self.basis_bracket(i, j);
                for k in 0..n - 1 {
                    q.set(a, b, k, img[k]);
                }
            }
        }
        (q, proj)
    }

    /// The first `k` basis vectors modulo the rest; valid when the tail is
    /// an ideal, as in an adapted basis.
    pub fn leading_quotient(&self, k: usize) -> Brackets {
        let mut q = Brackets::zero(k);
        for i in 0..k {
            for j in i + 1..k {
                for l in 0..k {
                    q.set(i, j, l, self.coeff(i, j, l));
                }
            }
        }
        q
    }
}
