//! Dense decompositions used by the subspace layer.
//!
//! The SVD is a one-sided (Hestenes) Jacobi iteration: it delivers singular
//! values to high relative accuracy and a full right factor, which is what
//! the null-space and intersection routines need.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

const MAX_SWEEPS: usize = 80;

/// Singular value decomposition `A = U diag(s) V^T`.
///
/// For an `m × n` input, `s` has `n` entries sorted in decreasing order,
/// `v` is a full `n × n` orthogonal matrix and `u` is `m × n`. Columns of
/// `u` paired with a zero singular value are zero. When `m < n` the input
/// is padded with zero rows, so trailing singular values are exactly zero.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.s.last().copied().unwrap_or(0.0)
    }

    /// Number of singular values at or above `rel_tol * sigma_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.sigma_max();
        if smax == 0.0 {
            return 0;
        }
        self.s.iter().take_while(|&&s| s >= rel_tol * smax).count()
    }
}

pub fn svd(a: &DenseMatrix) -> Svd {
    let (m, n) = a.shape();
    let rows = m.max(n);
    // work column-major: one Vec per column
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut c = a.column(j);
            c.resize(rows, 0.0);
            c
        })
        .collect();
    let mut vcols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut c = alloc::vec![0.0; n];
            c[j] = 1.0;
            c
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&cols[p], &cols[q]);
                    let mut al = 0.0;
                    let mut be = 0.0;
                    let mut ga = 0.0;
                    for (x, y) in cp.iter().zip(cq) {
                        al += x * x;
                        be += y * y;
                        ga += x * y;
                    }
                    (al, be, ga)
                };
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut vcols, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| libm::sqrt(c.iter().map(|x| x * x).sum()))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = DenseMatrix::from_fn(m, n, |i, k| {
        let j = order[k];
        if norms[j] > 0.0 {
            cols[j][i] / norms[j]
        } else {
            0.0
        }
    });
    let v = DenseMatrix::from_fn(n, n, |i, k| vcols[order[k]][i]);
    Svd { u, s, v }
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Solves `A X = B` for square `A` by LU with partial pivoting.
///
/// Returns `None` when a pivot vanishes exactly.
pub fn solve(a: &DenseMatrix, b: &DenseMatrix) -> Result<Option<DenseMatrix>> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.cols(),
        });
    }
    if b.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.rows(),
        });
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let k = b.cols();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| lu.get(i, col).abs().total_cmp(&lu.get(j, col).abs()))
            .unwrap_or(col);
        if lu.get(piv, col) == 0.0 {
            return Ok(None);
        }
        if piv != col {
            for j in 0..n {
                let t = lu.get(col, j);
                lu.set(col, j, lu.get(piv, j));
                lu.set(piv, j, t);
            }
            for j in 0..k {
                let t = x.get(col, j);
                x.set(col, j, x.get(piv, j));
                x.set(piv, j, t);
            }
        }
        let d = lu.get(col, col);
        for i in col + 1..n {
            let f = lu.get(i, col) / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                lu.set(i, j, lu.get(i, j) - f * lu.get(col, j));
            }
            for j in 0..k {
                x.set(i, j, x.get(i, j) - f * x.get(col, j));
            }
        }
    }
    for col in (0..n).rev() {
        let d = lu.get(col, col);
        for j in 0..k {
            let mut acc = x.get(col, j);
            for i in col + 1..n {
                acc -= lu.get(col, i) * x.get(i, j);
            }
            x.set(col, j, acc / d);
        }
    }
    Ok(Some(x))
}

/// Moore–Penrose pseudo-inverse with singular values below
/// `rel_tol * sigma_max` treated as zero.
pub fn pinv(a: &DenseMatrix, rel_tol: f64) -> DenseMatrix {
    let Svd { u, s, v } = svd(a);
    let smax = s.first().copied().unwrap_or(0.0);
    let (m, n) = a.shape();
    DenseMatrix::from_fn(n, m, |i, j| {
        let mut acc = 0.0;
        for (k, &sk) in s.iter().enumerate() {
            if sk > 0.0 && sk >= rel_tol * smax {
                acc += v.get(i, k) * u.get(j, k) / sk;
            }
        }
        acc
    })
}
