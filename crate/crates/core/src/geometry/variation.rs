use nalgebra::{DMatrix, DVector};

use super::{GeometryError, LeftInvariantMetric};

/// Vertical line `span(z)` and its `G`-orthogonal horizontal complement.
#[derive(Debug, Clone)]
pub struct SubmersionSplit {
    z: DVector<f64>,
    vertical_proj: DMatrix<f64>,
    horizontal_proj: DMatrix<f64>,
    horizontal_frame: Vec<DVector<f64>>,
    vertical_unit: DVector<f64>,
}

impl SubmersionSplit {
    pub fn new(g: &LeftInvariantMetric, z: DVector<f64>) -> Result<Self, GeometryError> {
        let n = g.dim();
        if z.len() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, found: z.len() });
        }
        let zz = g.inner(&z, &z);
        if !(zz > 0.0) {
            return Err(GeometryError::ZeroVertical);
        }
        // V E = (<E, z> / <z, z>) z
        let gz = g.matrix() * &z;
        let vertical_proj = &z * gz.transpose() / zz;
        let horizontal_proj = DMatrix::identity(n, n) - &vertical_proj;
        let columns: Vec<DVector<f64>> = (0..n).map(|i| horizontal_proj.column(i).into_owned()).collect();
        let horizontal_frame = g.orthonormalize(&columns);
        debug_assert_eq!(horizontal_frame.len(), n - 1);
        let vertical_unit = &z / zz.sqrt();
        Ok(SubmersionSplit { z, vertical_proj, horizontal_proj, horizontal_frame, vertical_unit })
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &DVector<f64> {
        &self.z
    }

    pub fn vertical(&self, e: &DVector<f64>) -> DVector<f64> {
        &self.vertical_proj * e
    }

    pub fn horizontal(&self, e: &DVector<f64>) -> DVector<f64> {
        &self.horizontal_proj * e
    }

    pub fn vertical_projection(&self) -> &DMatrix<f64> {
        &self.vertical_proj
    }

    pub fn horizontal_projection(&self) -> &DMatrix<f64> {
        &self.horizontal_proj
    }

    /// `G`-orthonormal basis of the horizontal space.
    pub fn horizontal_frame(&self) -> &[DVector<f64>] {
        &self.horizontal_frame
    }

    /// `z / |z|_G`.
    pub fn vertical_unit(&self) -> &DVector<f64> {
        &self.vertical_unit
    }
}

/// `g^t`: the vertical direction rescaled by `t`, the horizontal one fixed.
#[derive(Debug, Clone)]
pub struct CanonicalVariation {
    pub base_metric: LeftInvariantMetric,
    pub split: SubmersionSplit,
    pub t: f64,
    pub metric: LeftInvariantMetric,
}

impl CanonicalVariation {
    pub fn new(g: &LeftInvariantMetric, split: &SubmersionSplit, t: f64) -> Result<Self, GeometryError> {
        if !(t > 0.0) {
            return Err(GeometryError::NonPositiveScale(t));
        }
        let gm = g.matrix();
        let h = split.horizontal_projection();
        let v = split.vertical_projection();
        let gt = h.transpose() * gm * h + (v.transpose() * gm * v) * t;
        let metric = LeftInvariantMetric::new(gt)?;
        Ok(CanonicalVariation { base_metric: g.clone(), split: split.clone(), t, metric })
    }

    /// `g^t`-orthonormal frame: the horizontal frame followed by the rescaled
    /// vertical unit.
    pub fn frame(&self) -> Vec<DVector<f64>> {
        let mut f = self.split.horizontal_frame().to_vec();
        f.push(self.split.vertical_unit() / self.t.sqrt());
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> DVector<f64> {
        DVector::from_fn(n, |k, _| f64::from(u8::from(k == i)))
    }

    #[test]
    fn diagonal_variation() {
        let g = LeftInvariantMetric::identity(3);
        let split = SubmersionSplit::new(&g, e(3, 2)).unwrap();
        let var = CanonicalVariation::new(&g, &split, 0.25).unwrap();
        let expected = DMatrix::from_diagonal(&DVector::from_row_slice(&[1.0, 1.0, 0.25]));
        assert!((var.metric.matrix() - expected).amax() < 1e-15);
        let same = CanonicalVariation::new(&g, &split, 1.0).unwrap();
        assert!((same.metric.matrix() - g.matrix()).amax() < 1e-15);
    }

    #[test]
    fn tilted_horizontal_space() {
        let g = LeftInvariantMetric::from_row_major(3, &[1.0, 0.0, 0.3, 0.0, 1.0, 0.0, 0.3, 0.0, 1.0]).unwrap();
        let split = SubmersionSplit::new(&g, e(3, 2)).unwrap();
        let t = 0.1;
        let var = CanonicalVariation::new(&g, &split, t).unwrap();
        // horizontal lift of e1 is e1 - 0.3 e3
        let x = DVector::from_row_slice(&[1.0, 0.0, -0.3]);
        assert!((split.horizontal(&e(3, 0)) - &x).amax() < 1e-15);
        assert!((var.metric.inner(&x, &x) - g.inner(&x, &x)).abs() < 1e-14);
        let z = e(3, 2);
        assert!((var.metric.inner(&z, &z) - t * g.inner(&z, &z)).abs() < 1e-14);
        assert!(var.metric.inner(&x, &z).abs() < 1e-14);
        // G-orthogonality of the split is preserved by g^t
        let mixed = e(3, 0) + e(3, 1) * 0.7 + e(3, 2) * 2.0;
        let (hh, vv) = (split.horizontal(&mixed), split.vertical(&mixed));
        assert!(var.metric.inner(&hh, &vv).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_positive_scale() {
        let g = LeftInvariantMetric::identity(2);
        let split = SubmersionSplit::new(&g, e(2, 1)).unwrap();
        assert_eq!(CanonicalVariation::new(&g, &split, 0.0).unwrap_err(), GeometryError::NonPositiveScale(0.0));
        assert_eq!(SubmersionSplit::new(&g, DVector::zeros(2)).unwrap_err(), GeometryError::ZeroVertical);
    }
}
