use nalgebra::DVector;

use super::{Brackets, GeometryError, LeftInvariantMetric, DEGENERATE_GRAM};

/// Levi-Civita connection on left-invariant fields, from the Koszul formula
/// `2<∇_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>`.
#[derive(Debug, Clone)]
pub struct LeviCivita {
    n: usize,
    // gamma[(i*n + j)*n + l]: e_l-component of ∇_{e_i} e_j
    gamma: Vec<f64>,
}

impl LeviCivita {
    pub fn new(br: &Brackets, g: &LeftInvariantMetric) -> Result<Self, GeometryError> {
        let n = br.dim();
        if g.dim() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, found: g.dim() });
        }
        let gm = g.matrix();
        // <[e_a, e_b], e_c>
        let lower = |a: usize, b: usize, c: usize| (0..n).map(|k| br.coeff(a, b, k) * gm[(k, c)]).sum::<f64>();
        let mut gamma = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let koszul = DVector::from_fn(n, |k, _| 0.5 * (lower(i, j, k) - lower(j, k, i) + lower(k, i, j)));
                let v = g.raise(&koszul);
                gamma[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(v.as_slice());
            }
        }
        Ok(LeviCivita { n, gamma })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `∇_{e_i} e_j`.
    pub fn coeff(&self, i: usize, j: usize) -> DVector<f64> {
        let n = self.n;
        DVector::from_row_slice(&self.gamma[(i * n + j) * n..(i * n + j + 1) * n])
    }

    /// `∇_X Y` for left-invariant `X`, `Y`.
    pub fn nabla(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
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
                for l in 0..n {
                    out[l] += w * self.gamma[base + l];
                }
            }
        }
        out
    }
}

/// `<R(e_i, e_j) e_k, e_l>` with `R(X, Y) = ∇_[X,Y] - [∇_X, ∇_Y]`.
#[derive(Debug, Clone)]
pub struct CurvatureTensor {
    n: usize,
    r: Vec<f64>,
}

impl CurvatureTensor {
    pub fn new(br: &Brackets, g: &LeftInvariantMetric, lc: &LeviCivita) -> Self {
        let n = br.dim();
        let unit = |i: usize| DVector::from_fn(n, |k, _| f64::from(u8::from(k == i)));
        let mut r = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                let bij = br.basis_bracket(i, j);
                for k in 0..n {
                    let ek = unit(k);
                    let v = lc.nabla(&bij, &ek) - lc.nabla(&unit(i), &lc.coeff(j, k)) + lc.nabla(&unit(j), &lc.coeff(i, k));
                    let low = g.matrix() * v;
                    let base = ((i * n + j) * n + k) * n;
                    r[base..base + n].copy_from_slice(low.as_slice());
                }
            }
        }
        CurvatureTensor { n, r }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.r[((i * n + j) * n + k) * n + l]
    }

    /// `<R(a, b) c, d>`.
    pub fn eval(&self, a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>, d: &DVector<f64>) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for i in 0..n {
            if a[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let ab = a[i] * b[j];
                if ab == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let abc = ab * c[k];
                    if abc == 0.0 {
                        continue;
                    }
                    let base = ((i * n + j) * n + k) * n;
                    let mut s = 0.0;
                    for l in 0..n {
                        s += self.r[base + l] * d[l];
                    }
                    total += abc * s;
                }
            }
        }
        total
    }
}

/// A metric Lie algebra with its connection and curvature precomputed.
#[derive(Debug, Clone)]
pub struct LeftInvariantGeometry {
    pub brackets: Brackets,
    pub metric: LeftInvariantMetric,
    pub connection: LeviCivita,
    pub curvature: CurvatureTensor,
}

impl LeftInvariantGeometry {
    pub fn new(brackets: Brackets, metric: LeftInvariantMetric) -> Result<Self, GeometryError> {
        let connection = LeviCivita::new(&brackets, &metric)?;
        let curvature = CurvatureTensor::new(&brackets, &metric, &connection);
        Ok(LeftInvariantGeometry { brackets, metric, connection, curvature })
    }

    pub fn dim(&self) -> usize {
        self.brackets.dim()
    }

    /// Sectional curvature of `span(v, w)`, invariant under change of basis
    /// of the plane.
    pub fn sectional_curvature(&self, v: &DVector<f64>, w: &DVector<f64>) -> Result<f64, GeometryError> {
        let n = self.dim();
        for u in [v, w] {
            if u.len() != n {
                return Err(GeometryError::DimensionMismatch { expected: n, found: u.len() });
            }
        }
        let (vv, ww, vw) = (self.metric.inner(v, v), self.metric.inner(w, w), self.metric.inner(v, w));
        let gram = vv * ww - vw * vw;
        if gram <= DEGENERATE_GRAM * (vv * ww).max(f64::MIN_POSITIVE) {
            return Err(GeometryError::DegeneratePlane { gram });
        }
        Ok(self.curvature.eval(v, w, v, w) / gram)
    }

    /// Largest `|K|` over planes spanned by pairs of a `G`-orthonormal
    /// frame obtained from the coordinate basis.
    pub fn frame_sup_abs(&self) -> f64 {
        let n = self.dim();
        let basis: Vec<DVector<f64>> = (0..n).map(|i| DVector::from_fn(n, |k, _| f64::from(u8::from(k == i)))).collect();
        let frame = self.metric.orthonormalize(&basis);
        let mut best: f64 = 0.0;
        for a in 0..frame.len() {
            for b in a + 1..frame.len() {
                best = best.max(self.curvature.eval(&frame[a], &frame[b], &frame[a], &frame[b]).abs());
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn e(n: usize, i: usize) -> DVector<f64> {
        DVector::from_fn(n, |k, _| f64::from(u8::from(k == i)))
    }

    fn h3_geometry() -> LeftInvariantGeometry {
        LeftInvariantGeometry::new(Brackets::from_algebra(&catalog::h3()), LeftInvariantMetric::identity(3)).unwrap()
    }

    #[test]
    fn heisenberg_connection() {
        let g = h3_geometry();
        assert!((g.connection.coeff(0, 1) - e(3, 2) * 0.5).amax() < 1e-15);
        assert!((g.connection.coeff(0, 2) + e(3, 1) * 0.5).amax() < 1e-15);
    }

    #[test]
    fn abelian_is_flat() {
        let g = LeftInvariantGeometry::new(Brackets::zero(3), LeftInvariantMetric::from_diagonal(&[1.0, 2.0, 3.0]).unwrap()).unwrap();
        assert!((0..3).all(|i| (0..3).all(|j| g.connection.coeff(i, j).amax() == 0.0)));
        assert_eq!(g.sectional_curvature(&e(3, 0), &e(3, 1)).unwrap(), 0.0);
    }

    #[test]
    fn heisenberg_sectional_curvatures() {
        let g = h3_geometry();
        assert!((g.sectional_curvature(&e(3, 0), &e(3, 1)).unwrap() + 0.75).abs() < 1e-12);
        assert!((g.sectional_curvature(&e(3, 0), &e(3, 2)).unwrap() - 0.25).abs() < 1e-12);
        assert!((g.sectional_curvature(&e(3, 1), &e(3, 2)).unwrap() - 0.25).abs() < 1e-12);
        assert!((g.curvature.component(0, 1, 0, 1) + 0.75).abs() < 1e-12);
    }

    #[test]
    fn degenerate_plane_is_rejected() {
        let g = h3_geometry();
        let v = e(3, 0);
        assert!(matches!(g.sectional_curvature(&v, &(&v * 2.0)), Err(GeometryError::DegeneratePlane { .. })));
    }
}
