//! Integer matrix normal forms: row Hermite form, integer kernels, and Smith
//! form with unimodular transforms for solving `A x = b` over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// `row_a -= q * row_b` on a matrix stored by rows.
fn row_axpy(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (src, dst) = if a < b {
        let (x, y) = m.split_at_mut(b);
        (&y[0], &mut x[a])
    } else {
        let (x, y) = m.split_at_mut(a);
        (&x[b], &mut y[0])
    };
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= q * s;
    }
}

fn col_axpy(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[b].clone();
        row[a] -= q * s;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Row Hermite normal form of the lattice spanned by `rows` (with `ncols`
/// columns): echelon, positive pivots, entries above each pivot reduced into
/// `[0, pivot)`, zero rows dropped. Also returns the pivot columns.
pub fn hermite_rows(mut m: IntMatrix, ncols: usize) -> (IntMatrix, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        // smallest nonzero magnitude at or below r in this column
        while let Some(p) = (r..m.len())
            .filter(|&i| !m[i][col].is_zero())
            .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()))
        {
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if !m[i][col].is_zero() {
                    let q = m[i][col].div_floor(&m[r][col]);
                    row_axpy(&mut m, i, r, &q);
                    if !m[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][col].is_zero() {
            if m[r][col].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = m[i][col].div_floor(&m[r][col]);
                row_axpy(&mut m, i, r, &q);
            }
            pivots.push(col);
            r += 1;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Z-basis of `{x in Z^ncols : M x = 0}`, in row Hermite form.
///
/// Row-reducing `[M^T | I]` keeps the right block unimodular; rows whose left
/// block vanishes span the integer kernel, and the span is saturated.
pub fn integer_kernel(m: &IntMatrix, ncols: usize) -> IntMatrix {
    let nrows = m.len();
    let mut aug: IntMatrix = (0..ncols)
        .map(|c| {
            let mut row: Vec<BigInt> = (0..nrows).map(|r| m[r][c].clone()).collect();
            row.extend(identity(ncols)[c].iter().cloned());
            row
        })
        .collect();
    let (reduced, pivots) = hermite_rows(std::mem::take(&mut aug), nrows + ncols);
    let kernel: IntMatrix = reduced
        .into_iter()
        .zip(pivots)
        .filter(|(_, p)| *p >= nrows)
        .map(|(row, _)| row[nrows..].to_vec())
        .collect();
    hermite_rows(kernel, ncols).0
}

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diag: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub rows: usize,
    pub cols: usize,
}

pub fn smith(a: &IntMatrix, cols: usize) -> Smith {
    let rows = a.len();
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            let q = d[i][t].div_floor(&d[t][t]);
            row_axpy(&mut d, i, t, &q);
            row_axpy(&mut u, i, t, &q);
            clean &= d[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = d[t][j].div_floor(&d[t][t]);
            col_axpy(&mut d, j, t, &q);
            col_axpy(&mut v, j, t, &q);
            clean &= d[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility: fold an offending row into the pivot row and redo
        let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&d[i][j] % &d[t][t]).is_zero()));
        if let Some(i) = offending {
            let minus_one = -BigInt::one();
            row_axpy(&mut d, t, i, &minus_one);
            row_axpy(&mut u, t, i, &minus_one);
            continue;
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let diag = (0..rows.min(cols)).map(|i| d[i][i].clone()).collect();
    Smith { diag, u, v, rows, cols }
}

/// Row `r` of `U` and the invariant `d_r` show no integer solution exists:
/// `u . A` is `d_r` times an integer vector (zero when `d_r = 0`) while `u . b`
/// is not divisible by `d_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub multiplier: Vec<BigInt>,
    pub modulus: BigInt,
    pub residue: BigInt,
}

impl Obstruction {
    /// Independently re-checks the certificate against `A` and `b`.
    pub fn verify(&self, a: &IntMatrix, b: &[BigInt], cols: usize) -> bool {
        let combo: Vec<BigInt> = (0..cols)
            .map(|j| a.iter().zip(&self.multiplier).map(|(row, u)| &row[j] * u).sum())
            .collect();
        let rhs: BigInt = b.iter().zip(&self.multiplier).map(|(x, u)| x * u).sum();
        let divides = |m: &BigInt, x: &BigInt| if m.is_zero() { x.is_zero() } else { (x % m).is_zero() };
        combo.iter().all(|c| divides(&self.modulus, c)) && !divides(&self.modulus, &rhs)
    }
}

/// Solves `A x = b` over the integers, returning the particular solution with
/// free Smith coordinates set to zero.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt], cols: usize) -> Result<Vec<BigInt>, Obstruction> {
    let s = smith(a, cols);
    let ub: Vec<BigInt> = s.u.iter().map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum()).collect();
    let mut y = vec![BigInt::zero(); cols];
    for (r, c) in ub.iter().enumerate() {
        let d = s.diag.get(r).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !c.is_zero() {
                return Err(Obstruction { multiplier: s.u[r].clone(), modulus: d, residue: c.clone() });
            }
        } else {
            let (q, rem) = c.div_rem(&d);
            if !rem.is_zero() {
                return Err(Obstruction { multiplier: s.u[r].clone(), modulus: d.clone(), residue: c.mod_floor(&d) });
            }
            y[r] = q;
        }
    }
    Ok((0..cols).map(|i| s.v[i].iter().zip(&y).map(|(x, yy)| x * yy).sum()).collect())
}
