use nalgebra::{DMatrix, DVector};

use super::sampling::{unit_gaussian, unit_orthogonal};
use super::{
    Brackets, CanonicalVariation, GeometryError, LeftInvariantGeometry, LeftInvariantMetric, OneillTensors, PlaneSample,
    SampleStream, SubmersionSplit,
};
use crate::malcev::NilAlgebra;

/// The base of a circle fibration: `n / span(z)` with the quotient metric
/// pushed forward from the horizontal space.
#[derive(Debug, Clone)]
pub struct BaseQuotient {
    /// `dπ` as an `(n-1) x n` matrix.
    pub projection: DMatrix<f64>,
    pub geometry: LeftInvariantGeometry,
}

/// A left-invariant Riemannian submersion with one-dimensional central
/// fibers, together with all data needed at fixed `g`.
#[derive(Debug, Clone)]
pub struct CircleFibration {
    pub total: LeftInvariantGeometry,
    pub split: SubmersionSplit,
    pub oneill: OneillTensors,
    pub base: BaseQuotient,
}

/// The same fibration with `g` replaced by `g^t`.
#[derive(Debug, Clone)]
pub struct VariedFibration {
    pub variation: CanonicalVariation,
    pub geometry: LeftInvariantGeometry,
    /// `A^t`, `T^t` computed directly from `g^t`.
    pub oneill: OneillTensors,
}

impl VariedFibration {
    pub fn t(&self) -> f64 {
        self.variation.t
    }
}

/// Absolute defects of the curvature identities on one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionDefects {
    /// `ǧ(Ř(Y,X)Y,X) - <R^t(Y,X)Y,X>^t = 3t g(A_Y X, A_Y X)`
    pub horizontal: f64,
    /// `<R^t(Y,X)U,X>^t = -t g((D_X A)_Y X, U)`
    pub mixed: f64,
    /// `<R^t(U,X)U,X>^t = t^2 g(A_X U, A_X U)`
    pub vertical: f64,
    /// `K^t(σ)` directly vs. the three-term expansion
    pub total: f64,
    /// `K^t(σ) = <R^t(C,X)C,X>^t`
    pub k_direct: f64,
    /// `ǧ(Ř(Y,X)Y,X)`
    pub base_term: f64,
}

impl DecompositionDefects {
    pub fn max(&self) -> f64 {
        self.horizontal.max(self.mixed).max(self.vertical).max(self.total)
    }
}

impl CircleFibration {
    /// `z` must be central in the Lie algebra.
    pub fn new(brackets: Brackets, metric: LeftInvariantMetric, z: DVector<f64>) -> Result<Self, GeometryError> {
        let n = brackets.dim();
        if metric.dim() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, found: metric.dim() });
        }
        if z.len() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, found: z.len() });
        }
        if z.amax() == 0.0 {
            return Err(GeometryError::ZeroVertical);
        }
        let (index, norm) = brackets.centrality_defect(&z);
        if norm > 1e-12 * z.amax() {
            return Err(GeometryError::VerticalNotCentral { index, norm });
        }
        let split = SubmersionSplit::new(&metric, z.clone())?;
        let (base_brackets, projection) = brackets.quotient(&z);
        let lifts: Vec<DVector<f64>> = {
            let p = (0..n).rev().find(|&i| z[i].abs() > 1e-12 * z.amax()).expect("nonzero");
            (0..n).filter(|&i| i != p).map(|i| split.horizontal(&DVector::from_fn(n, |k, _| f64::from(u8::from(k == i))))).collect()
        };
        let base_gram = DMatrix::from_fn(n - 1, n - 1, |a, b| metric.inner(&lifts[a], &lifts[b]));
        let base_metric = LeftInvariantMetric::new(base_gram)?;
        let base = BaseQuotient { projection, geometry: LeftInvariantGeometry::new(base_brackets, base_metric)? };
        let total = LeftInvariantGeometry::new(brackets, metric)?;
        let oneill = OneillTensors::new(&total.connection, &split);
        Ok(CircleFibration { total, split, oneill, base })
    }

    /// The top step of the tower of an adapted algebra: fiber `e_n`.
    pub fn top_of(alg: &NilAlgebra, metric: LeftInvariantMetric) -> Result<Self, GeometryError> {
        let n = alg.dim();
        Self::new(Brackets::from_algebra(alg), metric, DVector::from_fn(n, |k, _| f64::from(u8::from(k + 1 == n))))
    }

    pub fn dim(&self) -> usize {
        self.total.dim()
    }

    pub fn metric(&self) -> &LeftInvariantMetric {
        &self.total.metric
    }

    pub fn base_metric(&self) -> &LeftInvariantMetric {
        &self.base.geometry.metric
    }

    /// `g`-length of the fiber circle `exp(R z) / exp(Z z)`.
    pub fn fiber_length(&self) -> f64 {
        self.metric().norm(self.split.z())
    }

    pub fn vary(&self, t: f64) -> Result<VariedFibration, GeometryError> {
        let variation = CanonicalVariation::new(self.metric(), &self.split, t)?;
        let geometry = LeftInvariantGeometry::new(self.total.brackets.clone(), variation.metric.clone())?;
        let oneill = OneillTensors::new(&geometry.connection, &variation.split);
        Ok(VariedFibration { variation, geometry, oneill })
    }

    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.base.projection * v
    }

    /// `ǧ(Ř(Y̌, X̌) Y̌, X̌)` for horizontal `X`, `Y`.
    pub fn base_term(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let (xb, yb) = (self.project(x), self.project(y));
        self.base.geometry.curvature.eval(&yb, &xb, &yb, &xb)
    }

    fn sample_from_frame_coords(&self, var: &VariedFibration, x_on: &DVector<f64>, c_on: &DVector<f64>) -> PlaneSample {
        let frame = var.variation.frame();
        let n = self.dim();
        let combine = |coords: &DVector<f64>| {
            let mut v = DVector::zeros(n);
            for (a, f) in frame.iter().enumerate() {
                v.axpy(coords[a], f, 1.0);
            }
            v
        };
        let x = combine(x_on);
        let c = combine(c_on);
        let u = &frame[n - 1] * c_on[n - 1];
        let y = &c - &u;
        PlaneSample { t: var.t(), x, c, u, y }
    }

    /// Sample `id` of a stream: `X` uniform on the horizontal unit sphere,
    /// `C` uniform on the unit sphere of `X^⊥`, both for `g^t`. `None` when
    /// there are no planes (dimension below 2).
    pub fn sample_plane(&self, var: &VariedFibration, stream: &SampleStream, id: u64) -> Option<PlaneSample> {
        let n = self.dim();
        if n < 2 {
            return None;
        }
        let mut rng = stream.rng(id);
        let xi = unit_gaussian(&mut rng, n - 1);
        let x_on = DVector::from_fn(n, |a, _| if a < n - 1 { xi[a] } else { 0.0 });
        let c_on = unit_orthogonal(&mut rng, &x_on);
        Some(self.sample_from_frame_coords(var, &x_on, &c_on))
    }

    /// Planes spanned by pairs of the `g^t`-orthonormal adapted frame, with
    /// a horizontal first vector.
    pub fn frame_planes(&self, var: &VariedFibration) -> Vec<PlaneSample> {
        let n = self.dim();
        let e = |a: usize| DVector::from_fn(n, |k, _| f64::from(u8::from(k == a)));
        let mut out = Vec::new();
        for a in 0..n.saturating_sub(1) {
            for b in a + 1..n {
                out.push(self.sample_from_frame_coords(var, &e(a), &e(b)));
            }
        }
        out
    }

    /// Evaluates both sides of the curvature identities for `g^t` on one
    /// sample, using `A` and `D A` of the unscaled metric `g`.
    pub fn decomposition_check(&self, var: &VariedFibration, s: &PlaneSample) -> DecompositionDefects {
        let t = var.t();
        let g = self.metric();
        let rt = &var.geometry.curvature;
        let (x, y, u, c) = (&s.x, &s.y, &s.u, &s.c);

        let base_term = self.base_term(x, y);
        let a_yx = self.oneill.a(y, x);
        let a_xu = self.oneill.a(x, u);
        let da = self.oneill.da(x, y, x);
        let a_yx2 = g.inner(&a_yx, &a_yx);
        let a_xu2 = g.inner(&a_xu, &a_xu);
        let da_u = g.inner(&da, u);

        let r_yxyx = rt.eval(y, x, y, x);
        let r_yxux = rt.eval(y, x, u, x);
        let r_uxux = rt.eval(u, x, u, x);
        let k_direct = rt.eval(c, x, c, x);

        let horizontal = ((base_term - r_yxyx) - 3.0 * t * a_yx2).abs();
        let mixed = (r_yxux + t * da_u).abs();
        let vertical = (r_uxux - t * t * a_xu2).abs();
        let expansion = (base_term - 3.0 * t * a_yx2) - 2.0 * t * da_u + t * t * a_xu2;
        let total = (k_direct - expansion).abs();
        DecompositionDefects { horizontal, mixed, vertical, total, k_direct, base_term }
    }
}
