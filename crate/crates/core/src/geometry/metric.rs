use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::GeometryError;

/// Inner product on the Lie algebra, extended to a left-invariant metric.
#[derive(Debug, Clone)]
pub struct LeftInvariantMetric {
    g: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl PartialEq for LeftInvariantMetric {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g
    }
}

impl LeftInvariantMetric {
    pub fn new(g: DMatrix<f64>) -> Result<Self, GeometryError> {
        if g.nrows() != g.ncols() {
            return Err(GeometryError::DimensionMismatch { expected: g.nrows(), found: g.ncols() });
        }
        let scale = g.amax().max(1.0);
        if (&g - g.transpose()).amax() > 1e-12 * scale {
            return Err(GeometryError::NotSymmetric);
        }
        let sym = (&g + g.transpose()) * 0.5;
        let chol = Cholesky::new(sym.clone()).ok_or(GeometryError::NotPositiveDefinite)?;
        Ok(LeftInvariantMetric { g: sym, chol })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).expect("identity is positive definite")
    }

    pub fn from_diagonal(d: &[f64]) -> Result<Self, GeometryError> {
        Self::new(DMatrix::from_diagonal(&DVector::from_row_slice(d)))
    }

    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self, GeometryError> {
        if entries.len() != n * n {
            return Err(GeometryError::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        Self::new(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        u.dot(&(&self.g * v))
    }

    pub fn norm(&self, u: &DVector<f64>) -> f64 {
        self.inner(u, u).sqrt()
    }

    /// Solves `G x = b`, i.e. raises an index.
    pub fn raise(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self, GeometryError> {
        Self::new(&self.g * lambda)
    }

    /// Gram-Schmidt of `vectors` with respect to this metric, skipping
    /// vectors that are dependent on earlier ones.
    pub fn orthonormalize(&self, vectors: &[DVector<f64>]) -> Vec<DVector<f64>> {
        let mut out: Vec<DVector<f64>> = Vec::new();
        for v in vectors {
            let mut w = v.clone();
            // two passes for stability
            for _ in 0..2 {
                for f in &out {
                    let c = self.inner(&w, f);
                    w -= f * c;
                }
            }
            let norm = self.norm(&w);
            if norm > 1e-12 * self.norm(v).max(1e-300) {
                out.push(w / norm);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_matrices() {
        assert_eq!(
            LeftInvariantMetric::from_row_major(2, &[1.0, 0.5, 0.0, 1.0]).unwrap_err(),
            GeometryError::NotSymmetric
        );
        assert_eq!(
            LeftInvariantMetric::from_diagonal(&[1.0, -1.0]).unwrap_err(),
            GeometryError::NotPositiveDefinite
        );
    }

    #[test]
    fn orthonormal_frame() {
        let g = LeftInvariantMetric::from_row_major(2, &[2.0, 0.5, 0.5, 1.0]).unwrap();
        let f = g.orthonormalize(&[DVector::from_row_slice(&[1.0, 0.0]), DVector::from_row_slice(&[0.0, 1.0])]);
        assert!((g.inner(&f[0], &f[0]) - 1.0).abs() < 1e-14);
        assert!(g.inner(&f[0], &f[1]).abs() < 1e-14);
    }
}
