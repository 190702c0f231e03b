//! Exact rational row reduction.

use num_traits::{One, Zero};

use super::Rational;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][col];
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let (pivot_row, row) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{x : M x = 0}` for an `m x ncols` matrix given by rows.
pub fn null_space(rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let (reduced, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Row-reduced basis of the span of `vectors`.
pub fn span_basis(vectors: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    rref(vectors, ncols).0
}
