use nalgebra::DVector;

use super::{LeviCivita, SubmersionSplit};

/// O'Neill's integrability tensor `A`, the fiber tensor `T`, and the
/// covariant derivative `D A`, evaluated on the left-invariant frame:
///
/// * `A_E F = H ∇_{HE} VF + V ∇_{HE} HF`
/// * `T_E F = H ∇_{VE} VF + V ∇_{VE} HF`
/// * `(D_E A)_F W = ∇_E (A_F W) - A_{∇_E F} W - A_F (∇_E W)`
#[derive(Debug, Clone)]
pub struct OneillTensors {
    n: usize,
    a: Vec<DVector<f64>>,
    t: Vec<DVector<f64>>,
    da: Vec<DVector<f64>>,
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    DVector::from_fn(n, |k, _| f64::from(u8::from(k == i)))
}

impl OneillTensors {
    pub fn new(lc: &LeviCivita, split: &SubmersionSplit) -> Self {
        let n = lc.dim();
        let a_of = |e: &DVector<f64>, f: &DVector<f64>| {
            let he = split.horizontal(e);
            split.horizontal(&lc.nabla(&he, &split.vertical(f))) + split.vertical(&lc.nabla(&he, &split.horizontal(f)))
        };
        let t_of = |e: &DVector<f64>, f: &DVector<f64>| {
            let ve = split.vertical(e);
            split.horizontal(&lc.nabla(&ve, &split.vertical(f))) + split.vertical(&lc.nabla(&ve, &split.horizontal(f)))
        };
        let mut a = Vec::with_capacity(n * n);
        let mut t = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(a_of(&unit(n, i), &unit(n, j)));
                t.push(t_of(&unit(n, i), &unit(n, j)));
            }
        }
        let mut tensors = OneillTensors { n, a, t, da: Vec::new() };
        let mut da = Vec::with_capacity(n * n * n);
        for i in 0..n {
            let ei = unit(n, i);
            for j in 0..n {
                let ej = unit(n, j);
                for k in 0..n {
                    let ek = unit(n, k);
                    let v = lc.nabla(&ei, &tensors.a(&ej, &ek))
                        - tensors.a(&lc.nabla(&ei, &ej), &ek)
                        - tensors.a(&ej, &lc.nabla(&ei, &ek));
                    da.push(v);
                }
            }
        }
        tensors.da = da;
        tensors
    }

    fn bilinear(table: &[DVector<f64>], n: usize, e: &DVector<f64>, f: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if e[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = e[i] * f[j];
                if w != 0.0 {
                    out.axpy(w, &table[i * n + j], 1.0);
                }
            }
        }
        out
    }

    /// `A_E F`.
    pub fn a(&self, e: &DVector<f64>, f: &DVector<f64>) -> DVector<f64> {
        Self::bilinear(&self.a, self.n, e, f)
    }

    /// `T_E F`.
    pub fn t(&self, e: &DVector<f64>, f: &DVector<f64>) -> DVector<f64> {
        Self::bilinear(&self.t, self.n, e, f)
    }

    /// `(D_E A)_F W`.
    pub fn da(&self, e: &DVector<f64>, f: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        let n = self.n;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if e[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let ef = e[i] * f[j];
                if ef == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let c = ef * w[k];
                    if c != 0.0 {
                        out.axpy(c, &self.da[(i * n + j) * n + k], 1.0);
                    }
                }
            }
        }
        out
    }

    /// Largest absolute component of `T` in the coordinate basis.
    pub fn t_max_abs(&self) -> f64 {
        self.t.iter().map(|v| v.amax()).fold(0.0, f64::max)
    }

    pub fn a_max_abs(&self) -> f64 {
        self.a.iter().map(|v| v.amax()).fold(0.0, f64::max)
    }
}
