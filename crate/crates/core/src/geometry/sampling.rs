use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{LeftInvariantMetric, DEGENERATE_GRAM};

/// Counter-based random streams: sample `id` of purpose `p` under `seed`
/// always sees the same numbers, whatever order samples are evaluated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleStream {
    key: [u8; 32],
}

impl SampleStream {
    pub const PLANES: u64 = 1;
    pub const CONSTANTS: u64 = 2;
    pub const BASE: u64 = 3;
    pub const VERIFY: u64 = 4;

    pub fn new(seed: u64, purpose: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&purpose.to_le_bytes());
        SampleStream { key }
    }

    pub fn rng(&self, id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(id);
        rng
    }
}

/// Uniform point on the unit sphere of `R^dim`.
pub fn unit_gaussian(rng: &mut ChaCha8Rng, dim: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

/// Uniform unit vector orthogonal to the unit vector `x` (Euclidean).
pub fn unit_orthogonal(rng: &mut ChaCha8Rng, x: &DVector<f64>) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(x.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
        let w = &v - x * x.dot(&v);
        let n2 = w.norm_squared();
        // Gram determinant of (x, w/|v|) is n2 / |v|^2
        if n2 > DEGENERATE_GRAM * v.norm_squared() {
            return w / n2.sqrt();
        }
    }
}

/// A 2-plane `σ = span(X, C)` with `X` horizontal, `|X| = |C| = 1` and
/// `<X, C> = 0` in `g^t`, and `C = U + Y` split into vertical and
/// horizontal parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneSample {
    pub t: f64,
    pub x: DVector<f64>,
    pub c: DVector<f64>,
    pub u: DVector<f64>,
    pub y: DVector<f64>,
}

impl PlaneSample {
    /// `|g(Y, Y) + t g(U, U) - 1|`: the vectors `X`, `Y`, `√t U` lie in the
    /// `g`-unit disk bundle.
    pub fn disk_defect(&self, g: &LeftInvariantMetric) -> f64 {
        (g.inner(&self.y, &self.y) + self.t * g.inner(&self.u, &self.u) - 1.0).abs()
    }
}
