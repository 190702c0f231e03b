use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certify::{diameter_bound, flag_fiber_lengths};
use super::sampling::{unit_gaussian, unit_orthogonal};
use super::{CircleFibration, GeometryError, LeftInvariantGeometry, SampleStream};

/// Explicit constant in `|K^t| <= |Ǩ| + C √t`.
///
/// With `X` a `g`-unit horizontal vector, `|Y|_g <= 1` and `√t |U|_g <= 1`:
/// `|K^t - Ǩ-term| <= 3t a_hh + 2√t da + t a_hv`, where
/// `a_hh = sup |A_Y X|²`, `da = sup |g((D_X A)_Y X, U)|` and
/// `a_hv = sup |A_X U|²` over `g`-unit arguments. The sups are estimated by
/// sampling and multiplied by `safety`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundConstant {
    pub a_hh: f64,
    pub da: f64,
    pub a_hv: f64,
    pub safety: f64,
    pub c: f64,
}

impl BoundConstant {
    pub const SAFETY: f64 = 2.0;

    fn from_sups(a_hh: f64, da: f64, a_hv: f64) -> Self {
        let safety = Self::SAFETY;
        BoundConstant { a_hh, da, a_hv, safety, c: safety * (3.0 * a_hh + 2.0 * da + a_hv) }
    }

    /// Bound on `|K^t - Ǩ-term|` for any `t > 0`; equals at most `C √t`
    /// when `t <= 1`.
    pub fn excess(&self, t: f64) -> f64 {
        if t <= 1.0 {
            self.c * t.sqrt()
        } else {
            self.safety * (3.0 * t * self.a_hh + 2.0 * t.sqrt() * self.da + t * self.a_hv)
        }
    }
}

/// Sampled decay of `sup |K^t|` along a grid of fiber scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub t_grid: Vec<f64>,
    pub sup_abs_k: Vec<f64>,
    pub base_sup_k: f64,
    pub constant: BoundConstant,
    /// `base_sup_k + excess(t)` per grid point.
    pub bound: Vec<f64>,
    /// Least-squares slope of `log sup|K^t|` against `log t`; `None` when
    /// some sup vanishes or the grid has fewer than two points.
    pub exponent_fit: Option<f64>,
    /// Sampled `sup |K^t(σ) - ǧ(Ř(Y,X)Y,X)|`.
    pub deviation: Vec<f64>,
    pub deviation_exponent_fit: Option<f64>,
    pub diam_bound: Vec<f64>,
    pub sample_count: usize,
    pub seed: u64,
}

impl CircleFibration {
    /// Sampled sups of `|A_Y X|²`, `|g((D_X A)_Y X, U)|`, `|A_X U|²` over
    /// `g`-unit arguments, including all frame vectors.
    pub fn bound_constant(&self, n_samples: usize, seed: u64) -> BoundConstant {
        let n = self.dim();
        if n < 2 {
            return BoundConstant::from_sups(0.0, 0.0, 0.0);
        }
        let hframe = self.split.horizontal_frame();
        let u = self.split.vertical_unit();
        let g = self.metric();
        let eval = |x: &DVector<f64>, y: &DVector<f64>| {
            let a_yx = self.oneill.a(y, x);
            let a_xu = self.oneill.a(x, u);
            let da = g.inner(&self.oneill.da(x, y, x), u).abs();
            (g.inner(&a_yx, &a_yx), da, g.inner(&a_xu, &a_xu))
        };
        let max3 = |a: (f64, f64, f64), b: (f64, f64, f64)| (a.0.max(b.0), a.1.max(b.1), a.2.max(b.2));

        let mut best = (0.0, 0.0, 0.0);
        for x in hframe {
            for y in hframe {
                best = max3(best, eval(x, y));
            }
        }
        let stream = SampleStream::new(seed, SampleStream::CONSTANTS);
        let combine = |coords: &DVector<f64>| {
            let mut v = DVector::zeros(n);
            for (a, f) in hframe.iter().enumerate() {
                v.axpy(coords[a], f, 1.0);
            }
            v
        };
        let sampled: Vec<(f64, f64, f64)> = (0..n_samples as u64)
            .into_par_iter()
            .map(|id| {
                let mut rng = stream.rng(id);
                let x = combine(&unit_gaussian(&mut rng, n - 1));
                let y = combine(&unit_gaussian(&mut rng, n - 1));
                eval(&x, &y)
            })
            .collect();
        for s in sampled {
            best = max3(best, s);
        }
        BoundConstant::from_sups(best.0, best.1, best.2)
    }

    /// Sampled `sup |Ǩ|` over planes of the base.
    pub fn base_sup(&self, n_samples: usize, seed: u64) -> f64 {
        sampled_sup_abs_k(&self.base.geometry, n_samples, &SampleStream::new(seed, SampleStream::BASE))
    }

    /// Upper bound for `diam(g^t)`: the base bound at full size plus half
    /// the rescaled fiber length.
    pub fn diam_bound(&self, t: f64) -> f64 {
        let base = flag_fiber_lengths(self.base_metric());
        diameter_bound(&base, &vec![1.0; base.len()]) + 0.5 * self.fiber_length() * t.sqrt()
    }
}

/// `sup |K|` over pairs of an orthonormal frame and `n_samples` uniformly
/// random orthonormal pairs.
pub(crate) fn sampled_sup_abs_k(geo: &LeftInvariantGeometry, n_samples: usize, stream: &SampleStream) -> f64 {
    let n = geo.dim();
    if n < 2 {
        return 0.0;
    }
    let basis: Vec<DVector<f64>> = (0..n).map(|i| DVector::from_fn(n, |k, _| f64::from(u8::from(k == i)))).collect();
    let frame = geo.metric.orthonormalize(&basis);
    let combine = |coords: &DVector<f64>| {
        let mut v = DVector::zeros(n);
        for (a, f) in frame.iter().enumerate() {
            v.axpy(coords[a], f, 1.0);
        }
        v
    };
    let sampled: Vec<f64> = (0..n_samples as u64)
        .into_par_iter()
        .map(|id| {
            let mut rng = stream.rng(id);
            let x = unit_gaussian(&mut rng, n);
            let c = unit_orthogonal(&mut rng, &x);
            let (x, c) = (combine(&x), combine(&c));
            geo.curvature.eval(&c, &x, &c, &x).abs()
        })
        .collect();
    sampled.into_iter().fold(geo.frame_sup_abs(), f64::max)
}

fn loglog_slope(ts: &[f64], ys: &[f64]) -> Option<f64> {
    if ts.len() < 2 || ys.iter().any(|&y| !(y > 0.0)) {
        return None;
    }
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ls: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ls.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ls).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

/// Geometric grid from `t_max` down to `t_min` with `points` entries.
pub fn geometric_grid(t_max: f64, t_min: f64, points: usize) -> Result<Vec<f64>, GeometryError> {
    if !(t_min > 0.0) || !(t_max >= t_min) || !t_max.is_finite() {
        return Err(GeometryError::InvalidGrid(format!("need t_max >= t_min > 0, got {t_max} and {t_min}")));
    }
    match points {
        0 => Err(GeometryError::InvalidGrid("no grid points".into())),
        1 => Ok(vec![t_max]),
        _ => {
            // base-10 exponents keep decade grids exact
            let (a, b) = (t_max.log10(), t_min.log10());
            let step = (b - a) / (points - 1) as f64;
            Ok((0..points)
                .map(|i| match i {
                    0 => t_max,
                    _ if i + 1 == points => t_min,
                    _ => 10f64.powf(a + step * i as f64),
                })
                .collect())
        }
    }
}

/// Samples `n_samples` planes per grid point (plus the frame planes),
/// records `sup |K^t|`, and checks every sample against the bound.
///
/// The check is per sample: `|K^t(σ)| <= max(|Ǩ-term|, base_sup) + excess(t)`.
/// A failure returns [`GeometryError::BoundViolated`] with the offending
/// sample id (`u64::MAX - k` for the `k`-th frame plane).
pub fn lemma_scan(fib: &CircleFibration, t_grid: &[f64], n_samples: usize, seed: u64) -> Result<DecayReport, GeometryError> {
    if t_grid.is_empty() {
        return Err(GeometryError::InvalidGrid("empty grid".into()));
    }
    if t_grid.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(GeometryError::InvalidGrid("grid values must be positive and finite".into()));
    }
    if t_grid.windows(2).any(|w| w[1] > w[0]) {
        return Err(GeometryError::InvalidGrid("grid must be nonincreasing".into()));
    }
    let constant = fib.bound_constant(n_samples, seed);
    let base_sup_k = fib.base_sup(n_samples, seed);
    let stream = SampleStream::new(seed, SampleStream::PLANES);

    let mut sup_abs_k = Vec::with_capacity(t_grid.len());
    let mut deviation = Vec::with_capacity(t_grid.len());
    let mut bound = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let var = fib.vary(t)?;
        let excess = constant.excess(t);
        let b = base_sup_k + excess;
        let evaluate = |s: &super::PlaneSample| {
            let k = var.geometry.curvature.eval(&s.c, &s.x, &s.c, &s.x);
            let base = fib.base_term(&s.x, &s.y);
            let allowed = base.abs().max(base_sup_k) + excess;
            (k.abs(), (k - base).abs(), allowed)
        };
        let frame: Vec<(u64, (f64, f64, f64))> = fib
            .frame_planes(&var)
            .iter()
            .enumerate()
            .map(|(k, s)| (u64::MAX - k as u64, evaluate(s)))
            .collect();
        let sampled: Vec<(u64, (f64, f64, f64))> = (0..n_samples as u64)
            .into_par_iter()
            .filter_map(|id| fib.sample_plane(&var, &stream, id).map(|s| (id, evaluate(&s))))
            .collect();

        let (mut sup, mut dev) = (0.0f64, 0.0f64);
        for (id, (k, d, allowed)) in frame.into_iter().chain(sampled) {
            let slack = 1e-12 * (1.0 + allowed);
            if k > allowed + slack {
                return Err(GeometryError::BoundViolated { t, sample: id, k, bound: allowed });
            }
            sup = sup.max(k);
            dev = dev.max(d);
        }
        sup_abs_k.push(sup);
        deviation.push(dev);
        bound.push(b);
    }
    let exponent_fit = loglog_slope(t_grid, &sup_abs_k);
    let deviation_exponent_fit = loglog_slope(t_grid, &deviation);
    let diam_bound = t_grid.iter().map(|&t| fib.diam_bound(t)).collect();
    Ok(DecayReport {
        t_grid: t_grid.to_vec(),
        sup_abs_k,
        base_sup_k,
        constant,
        bound,
        exponent_fit,
        deviation,
        deviation_exponent_fit,
        diam_bound,
        sample_count: n_samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::geometry::LeftInvariantMetric;

    fn h3_fib() -> CircleFibration {
        CircleFibration::top_of(&catalog::h3(), LeftInvariantMetric::identity(3)).unwrap()
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = geometric_grid(1.0, 1e-6, 7).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[6], 1e-6);
        assert_eq!(g, vec![1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6]);
        assert!(geometric_grid(1e-6, 1.0, 3).is_err());
        assert!(geometric_grid(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let ts = [1.0, 0.1, 0.01];
        let ys: Vec<f64> = ts.iter().map(|t: &f64| 3.0 * t.powf(0.5)).collect();
        assert!((loglog_slope(&ts, &ys).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(loglog_slope(&ts, &[1.0, 0.0, 1.0]), None);
    }

    #[test]
    fn h3_scan_is_linear() {
        let grid = geometric_grid(1.0, 1e-6, 7).unwrap();
        let r = lemma_scan(&h3_fib(), &grid, 500, 0).unwrap();
        assert_eq!(r.base_sup_k, 0.0);
        for (t, k) in grid.iter().zip(&r.sup_abs_k) {
            assert!((k - 0.75 * t).abs() < 1e-9, "t={t} k={k}");
        }
        assert!((r.exponent_fit.unwrap() - 1.0).abs() < 0.02);
        assert!(r.diam_bound.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn h3_constant_sups() {
        // A_{e1} e2 = -½ e3 on the identity metric
        let c = h3_fib().bound_constant(200, 1);
        assert!((c.a_hh - 0.25).abs() < 1e-12);
        assert!((c.a_hv - 0.25).abs() < 1e-12);
        assert!(c.da.abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_grids() {
        let f = h3_fib();
        assert!(matches!(lemma_scan(&f, &[], 10, 0), Err(GeometryError::InvalidGrid(_))));
        assert!(matches!(lemma_scan(&f, &[0.1, 1.0], 10, 0), Err(GeometryError::InvalidGrid(_))));
        assert!(matches!(lemma_scan(&f, &[1.0, -1.0], 10, 0), Err(GeometryError::InvalidGrid(_))));
    }
}
