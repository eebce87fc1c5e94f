//! Gaussian elimination over a [`Field`]. Exact fields pivot on any nonzero
//! entry; inexact ones use partial pivoting with a tolerance.

use super::DenseMatrix;
use crate::scalar::Field;

fn pick_pivot<F: Field>(m: &DenseMatrix<F>, col: usize, from: usize, tol: f64) -> Option<usize> {
    if F::EXACT {
        (from..m.rows()).find(|&i| !m[(i, col)].is_zero())
    } else {
        let mut best: Option<(usize, f64)> = None;
        for i in from..m.rows() {
            let v = m[(i, col)].magnitude();
            if v > tol && best.map_or(true, |(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        best.map(|b| b.0)
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(mut m: DenseMatrix<F>, tol: f64) -> (DenseMatrix<F>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = pick_pivot(&m, c, r, tol) else { continue };
        m.swap_rows(r, p);
        let inv = F::one() / m[(r, c)].clone();
        for v in m.row_mut(r) {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        for i in 0..m.rows() {
            if i != r && !m[(i, c)].is_negligible(0.0) {
                let f = -m[(i, c)].clone();
                m.add_row_multiple(i, r, &f);
                if !F::EXACT {
                    m[(i, c)] = F::zero();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(m: &DenseMatrix<F>, tol: f64) -> usize {
    rref(m.clone(), tol).1.len()
}

/// Basis of the right nullspace, one vector per free column.
pub fn nullspace<F: Field>(m: &DenseMatrix<F>, tol: f64) -> Vec<Vec<F>> {
    let (r, pivots) = rref(m.clone(), tol);
    let n = m.cols();
    let mut is_pivot = vec![None; n];
    for (row, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(row);
    }
    (0..n)
        .filter(|&c| is_pivot[c].is_none())
        .map(|free| {
            let mut v = vec![F::zero(); n];
            v[free] = F::one();
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = -r[(row, free)].clone();
            }
            v
        })
        .collect()
}

/// A particular solution of `m x = b` (free variables set to zero), or
/// `None` when the system is inconsistent.
pub fn solve<F: Field>(m: &DenseMatrix<F>, b: &[F], tol: f64) -> Option<Vec<F>> {
    assert_eq!(m.rows(), b.len());
    let mut aug = DenseMatrix::zeros(m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols())] = b[i].clone();
    }
    let (r, pivots) = rref(aug, tol);
    if pivots.last() == Some(&m.cols()) {
        return None;
    }
    if !F::EXACT {
        for i in pivots.len()..m.rows() {
            if !r[(i, m.cols())].is_negligible(tol.max(1e-9)) {
                return None;
            }
        }
    }
    let mut x = vec![F::zero(); m.cols()];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = r[(row, m.cols())].clone();
    }
    Some(x)
}

/// LU factorization with row pivoting of a square nonsingular matrix.
#[derive(Clone, Debug)]
pub struct Lu<F> {
    lu: DenseMatrix<F>,
    perm: Vec<usize>,
}

impl<F: Field> Lu<F> {
    pub fn new(mut a: DenseMatrix<F>, tol: f64) -> Option<Self> {
        let n = a.rows();
        assert_eq!(n, a.cols(), "LU needs a square matrix");
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = pick_pivot(&a, k, k, tol)?;
            a.swap_rows(k, p);
            perm.swap(k, p);
            let piv = a[(k, k)].clone();
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let l = a[(i, k)].clone() / piv.clone();
                for j in k + 1..n {
                    if !a[(k, j)].is_zero() {
                        let v = a[(i, j)].clone() - l.clone() * a[(k, j)].clone();
                        a[(i, j)] = v;
                    }
                }
                a[(i, k)] = l;
            }
        }
        Some(Lu { lu: a, perm })
    }

    pub fn solve(&self, b: &[F]) -> Vec<F> {
        let n = self.lu.rows();
        let mut y: Vec<F> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                if !self.lu[(i, j)].is_zero() && !y[j].is_zero() {
                    y[i] = y[i].clone() - self.lu[(i, j)].clone() * y[j].clone();
                }
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                if !self.lu[(i, j)].is_zero() && !y[j].is_zero() {
                    y[i] = y[i].clone() - self.lu[(i, j)].clone() * y[j].clone();
                }
            }
            y[i] = y[i].clone() / self.lu[(i, i)].clone();
        }
        y
    }
}
