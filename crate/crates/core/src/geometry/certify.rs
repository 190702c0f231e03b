use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::scan::sampled_sup_abs_k;
use super::{Brackets, CircleFibration, GeometryError, LeftInvariantGeometry, LeftInvariantMetric, SampleStream};
use crate::tower::BundleTower;

/// Fiber lengths `ℓ_1, …, ℓ_n` of the flag `span(e_k, …, e_n)`: `ℓ_k` is
/// the `g`-length of the image of `e_k` in `n / span(e_{k+1}, …, e_n)`.
pub fn flag_fiber_lengths(g: &LeftInvariantMetric) -> Vec<f64> {
    reverse_frame(g).1
}

/// Reverse Gram–Schmidt on `e_n, …, e_1`: `f_k ∈ span(e_k, …, e_n)` and
/// `e_k = ℓ_k f_k + (terms in f_{k+1}, …)`.
fn reverse_frame(g: &LeftInvariantMetric) -> (DMatrix<f64>, Vec<f64>) {
    let n = g.dim();
    let mut f = DMatrix::zeros(n, n);
    let mut lengths = vec![0.0; n];
    for k in (0..n).rev() {
        let mut w = DVector::from_fn(n, |i, _| f64::from(u8::from(i == k)));
        for _ in 0..2 {
            for j in k + 1..n {
                let fj = f.column(j).into_owned();
                let c = g.inner(&w, &fj);
                w.axpy(-c, &fj, 1.0);
            }
        }
        let l = g.norm(&w);
        lengths[k] = l;
        f.set_column(k, &(w / l));
    }
    (f, lengths)
}

/// `Σ_k s_k φ_k ⊗ φ_k`, where `φ_k` is the coframe dual to the reverse
/// Gram–Schmidt frame of `g`. Scaling `s_k` is the canonical variation of
/// the `k`-th circle fibration of the tower; all ones gives back `g`.
pub fn tower_metric(g: &LeftInvariantMetric, scales: &[f64]) -> Result<LeftInvariantMetric, GeometryError> {
    let n = g.dim();
    if scales.len() != n {
        return Err(GeometryError::DimensionMismatch { expected: n, found: scales.len() });
    }
    if let Some(&s) = scales.iter().find(|&&s| !(s > 0.0)) {
        return Err(GeometryError::NonPositiveScale(s));
    }
    let (f, _) = reverse_frame(g);
    let phi = f.try_inverse().ok_or(GeometryError::NotPositiveDefinite)?;
    let d = DMatrix::from_diagonal(&DVector::from_column_slice(scales));
    let m = phi.transpose() * d * &phi;
    LeftInvariantMetric::new((&m + m.transpose()) * 0.5)
}

/// `Σ_k ½ ℓ_k √t_k`: each circle of length `ℓ √t` adds at most half its
/// length to the diameter of its base.
pub fn diameter_bound(lengths: &[f64], ts: &[f64]) -> f64 {
    lengths.iter().zip(ts).map(|(l, t)| 0.5 * l * t.sqrt()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub n_samples: usize,
    pub seed: u64,
    pub max_rounds: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { n_samples: 2000, seed: 0, max_rounds: 20 }
    }
}

/// One circle fibration of the tower, with its chosen fiber scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCertificate {
    /// Dimension of the total space of this level.
    pub dim: usize,
    pub t: f64,
    pub budget: f64,
    /// Sampled `sup |K|` of this level at the chosen scale.
    pub sampled_sup: f64,
    pub base_sup: f64,
    pub constant: f64,
    /// `base_sup + C √t`.
    pub certified_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatnessCertificate {
    pub eps: f64,
    /// Fiber scales, top level first.
    pub schedule: Vec<f64>,
    /// Levels, top first.
    pub levels: Vec<LevelCertificate>,
    /// Sampled `sup |K|` of the assembled metric.
    pub achieved_sup: f64,
    pub diam_bound: f64,
    /// Refinement rounds needed after the greedy schedule (0 if none).
    pub rounds: usize,
    pub sample_count: usize,
    pub seed: u64,
}

fn level_geometry(br: &Brackets, g: &LeftInvariantMetric, scales: &[f64]) -> Result<LeftInvariantGeometry, GeometryError> {
    let k = scales.len();
    let full = tower_metric(g, &[scales, &vec![1.0; g.dim() - k][..]].concat())?;
    let sub = full.matrix().view((0, 0), (k, k)).into_owned();
    LeftInvariantGeometry::new(br.leading_quotient(k), LeftInvariantMetric::new(sub)?)
}

/// Largest `t` in `(0, 1]` (up to bisection accuracy) whose sampled
/// `sup |K|` stays within `budget`, starting from a certified lower bracket.
fn choose_scale(fib: &CircleFibration, budget: f64, base_sup: f64, c: f64, opts: &CertifyOptions) -> Result<f64, GeometryError> {
    let stream = SampleStream::new(opts.seed, SampleStream::PLANES);
    let sup_at = |t: f64| -> Result<f64, GeometryError> { Ok(sampled_sup_abs_k(&fib.vary(t)?.geometry, opts.n_samples, &stream)) };
    if sup_at(1.0)? <= budget {
        return Ok(1.0);
    }
    let mut lo = if budget > base_sup && c > 0.0 { ((budget - base_sup) / c).powi(2).min(1.0) } else { 1e-12 };
    let mut tries = 0;
    while sup_at(lo)? > budget && tries < 60 {
        lo *= 0.5;
        tries += 1;
    }
    let mut hi = 1.0f64;
    for _ in 0..48 {
        let mid = (lo.ln() * 0.5 + hi.ln() * 0.5).exp();
        if mid <= lo || mid >= hi {
            break;
        }
        if sup_at(mid)? <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Builds a collapsing schedule for the tower so that the sampled sectional
/// curvature of the assembled metric is at most `eps`.
///
/// Level `k` (counted from the bottom, `n` levels) gets the budget
/// `eps · 2^(k - n)`. Going up, each level picks the largest fiber scale
/// whose sampled `sup |K|` fits its budget, with `base_sup + C √t <= budget`
/// as the starting bracket. The assembled metric is then checked on an
/// independent sample stream; on failure every scale below 1 is halved, for
/// at most `max_rounds` rounds.
pub fn certify_almost_flat(
    tower: &BundleTower,
    seed_metric: &LeftInvariantMetric,
    eps: f64,
    opts: &CertifyOptions,
) -> Result<FlatnessCertificate, GeometryError> {
    if !(eps > 0.0) {
        return Err(GeometryError::NonPositiveScale(eps));
    }
    let top = tower.top();
    let n = top.dim();
    if seed_metric.dim() != n {
        return Err(GeometryError::DimensionMismatch { expected: n, found: seed_metric.dim() });
    }
    let br = Brackets::from_algebra(top.algebra());
    let lengths = flag_fiber_lengths(seed_metric);

    let mut scales: Vec<f64> = Vec::with_capacity(n);
    let mut levels = Vec::with_capacity(n);
    for k in 1..=n {
        let budget = eps * 0.5f64.powi((n - k) as i32);
        let ones = [&scales[..], &[1.0]].concat();
        let geo = level_geometry(&br, seed_metric, &ones)?;
        let z = DVector::from_fn(k, |i, _| f64::from(u8::from(i + 1 == k)));
        let fib = CircleFibration::new(geo.brackets, geo.metric, z)?;
        let base_sup = fib.base_sup(opts.n_samples, opts.seed);
        let constant = fib.bound_constant(opts.n_samples, opts.seed).c;
        let t = choose_scale(&fib, budget, base_sup, constant, opts)?;
        let sampled_sup = sampled_sup_abs_k(&fib.vary(t)?.geometry, opts.n_samples, &SampleStream::new(opts.seed, SampleStream::PLANES));
        scales.push(t);
        levels.push(LevelCertificate {
            dim: k,
            t,
            budget,
            sampled_sup,
            base_sup,
            constant,
            certified_bound: base_sup + constant * t.sqrt(),
        });
    }

    let verify = SampleStream::new(opts.seed, SampleStream::VERIFY);
    let mut rounds = 0;
    let achieved = loop {
        let sup = match n {
            0 => 0.0,
            _ => sampled_sup_abs_k(&level_geometry(&br, seed_metric, &scales)?, opts.n_samples, &verify),
        };
        if sup <= eps {
            break sup;
        }
        if rounds == opts.max_rounds {
            return Err(GeometryError::BudgetNotMet { eps, achieved: sup, rounds });
        }
        rounds += 1;
        for (s, level) in scales.iter_mut().zip(levels.iter_mut()) {
            if *s < 1.0 {
                *s *= 0.5;
                level.t = *s;
                level.certified_bound = level.base_sup + level.constant * s.sqrt();
            }
        }
    };

    let diam_bound = diameter_bound(&lengths, &scales);
    scales.reverse();
    levels.reverse();
    Ok(FlatnessCertificate {
        eps,
        schedule: scales,
        levels,
        achieved_sup: achieved,
        diam_bound,
        rounds,
        sample_count: opts.n_samples,
        seed: opts.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn tower_metric_all_ones_is_identity_map() {
        let g = LeftInvariantMetric::from_row_major(3, &[2.0, 0.3, 0.1, 0.3, 1.0, 0.2, 0.1, 0.2, 1.5]).unwrap();
        let back = tower_metric(&g, &[1.0, 1.0, 1.0]).unwrap();
        assert!((back.matrix() - g.matrix()).amax() < 1e-12);
    }

    #[test]
    fn top_scale_is_canonical_variation() {
        let g = LeftInvariantMetric::from_row_major(3, &[2.0, 0.3, 0.1, 0.3, 1.0, 0.2, 0.1, 0.2, 1.5]).unwrap();
        let fib = CircleFibration::new(Brackets::from_algebra(&catalog::h3()), g.clone(), DVector::from_vec(vec![0.0, 0.0, 1.0])).unwrap();
        let var = fib.vary(0.3).unwrap();
        let tm = tower_metric(&g, &[1.0, 1.0, 0.3]).unwrap();
        assert!((var.variation.metric.matrix() - tm.matrix()).amax() < 1e-12);
    }

    #[test]
    fn identity_flag_lengths() {
        assert_eq!(flag_fiber_lengths(&LeftInvariantMetric::identity(3)), vec![1.0, 1.0, 1.0]);
        let g = LeftInvariantMetric::from_row_major(2, &[1.0, 0.5, 0.5, 1.0]).unwrap();
        // e1 modulo e2 has length sqrt(1 - 1/4)
        let l = flag_fiber_lengths(&g);
        assert!((l[0] - 0.75f64.sqrt()).abs() < 1e-15);
        assert!((l[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diameter_of_scaled_torus() {
        assert!((diameter_bound(&[1.0, 2.0], &[1.0, 0.25]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn flat_tower_keeps_unit_scales() {
        let tower = catalog::torus(3).peel_tower();
        let cert = certify_almost_flat(&tower, &LeftInvariantMetric::identity(3), 1e-6, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.schedule, vec![1.0, 1.0, 1.0]);
        assert_eq!(cert.achieved_sup, 0.0);
        assert_eq!(cert.rounds, 0);
    }

    #[test]
    fn h3_top_scale_near_closed_form() {
        let tower = catalog::h3_lattice().peel_tower();
        let eps = 0.01;
        let cert = certify_almost_flat(&tower, &LeftInvariantMetric::identity(3), eps, &CertifyOptions::default()).unwrap();
        let t = cert.schedule[0];
        assert!(t <= 4.0 * eps / 3.0 + 1e-12);
        assert!((t - 4.0 * eps / 3.0).abs() < 0.1 * 4.0 * eps / 3.0, "t = {t}");
        assert_eq!(&cert.schedule[1..], &[1.0, 1.0]);
        assert!(cert.achieved_sup <= eps);
    }

    #[test]
    fn rejects_nonpositive_eps() {
        let tower = catalog::h3_lattice().peel_tower();
        let r = certify_almost_flat(&tower, &LeftInvariantMetric::identity(3), 0.0, &CertifyOptions::default());
        assert!(matches!(r, Err(GeometryError::NonPositiveScale(_))));
    }
}
