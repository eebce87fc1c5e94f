//! Smith normal form over the integers.
//!
//! Pivoting: at each step the pivot is the entry of minimal absolute value in
//! the remaining block; ties are broken by the Markowitz count
//! `(row_nnz - 1) * (col_nnz - 1)` and then by position. Row and column
//! eliminations use truncated division, and whenever a remainder survives the
//! smallest entry of the pivot row/column is swapped in and elimination
//! repeats. A final pass enforces `d_i | d_{i+1}` with 2x2 unimodular
//! transforms and makes the diagonal non-negative.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::DenseMatrix;

/// `U * A * V = D` with `U`, `V` unimodular. Inverses are tracked alongside.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: DenseMatrix<BigInt>,
    pub u_inv: DenseMatrix<BigInt>,
    pub v: DenseMatrix<BigInt>,
    pub v_inv: DenseMatrix<BigInt>,
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub diagonal: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// The full diagonal matrix `D`.
    pub fn d(&self) -> DenseMatrix<BigInt> {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.diagonal.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// Columns of `V` spanning the integer kernel of `A`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.cols).map(|j| self.v.column(j)).collect()
    }
}

struct Work {
    a: DenseMatrix<BigInt>,
    u: DenseMatrix<BigInt>,
    u_inv: DenseMatrix<BigInt>,
    v: DenseMatrix<BigInt>,
    v_inv: DenseMatrix<BigInt>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row_i -= q * row_t
    fn sub_row(&mut self, i: usize, t: usize, q: &BigInt) {
        let nq = -q.clone();
        self.a.add_row_multiple(i, t, &nq);
        self.u.add_row_multiple(i, t, &nq);
        self.u_inv.add_col_multiple(t, i, q);
    }

    /// col_j -= q * col_t
    fn sub_col(&mut self, j: usize, t: usize, q: &BigInt) {
        let nq = -q.clone();
        self.a.add_col_multiple(j, t, &nq);
        self.v.add_col_multiple(j, t, &nq);
        self.v_inv.add_row_multiple(t, j, q);
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let (m, n) = (self.a.rows(), self.a.cols());
        let mut best: Option<BigInt> = None;
        for i in t..m {
            for x in &self.a.row(i)[t..] {
                if !x.is_zero() {
                    let ax = x.abs();
                    if best.as_ref().map_or(true, |b| &ax < b) {
                        best = Some(ax);
                    }
                }
            }
        }
        let best = best?;
        let mut row_nnz = vec![0usize; m];
        let mut col_nnz = vec![0usize; n];
        for i in t..m {
            for (j, x) in self.a.row(i).iter().enumerate().skip(t) {
                if !x.is_zero() {
                    row_nnz[i] += 1;
                    col_nnz[j] += 1;
                }
            }
        }
        let mut choice = None;
        let mut cost = usize::MAX;
        for i in t..m {
            for (j, x) in self.a.row(i).iter().enumerate().skip(t) {
                if !x.is_zero() && x.abs() == best {
                    let c = (row_nnz[i] - 1) * (col_nnz[j] - 1);
                    if c < cost {
                        cost = c;
                        choice = Some((i, j));
                    }
                }
            }
        }
        choice
    }

    /// Clears row and column `t` outside the pivot.
    fn eliminate(&mut self, t: usize) {
        let (m, n) = (self.a.rows(), self.a.cols());
        loop {
            let p = self.a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if !self.a[(i, t)].is_zero() {
                    let q = &self.a[(i, t)] / &p;
                    if !q.is_zero() {
                        self.sub_row(i, t, &q);
                    }
                    if !self.a[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !self.a[(t, j)].is_zero() {
                    let q = &self.a[(t, j)] / &p;
                    if !q.is_zero() {
                        self.sub_col(j, t, &q);
                    }
                    if !self.a[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                return;
            }
            // A remainder smaller than the pivot survived; bring it in.
            let mut best = (self.a[(t, t)].abs(), None);
            for i in t + 1..m {
                let x = self.a[(i, t)].abs();
                if !x.is_zero() && x < best.0 {
                    best = (x, Some((i, true)));
                }
            }
            for j in t + 1..n {
                let x = self.a[(t, j)].abs();
                if !x.is_zero() && x < best.0 {
                    best = (x, Some((j, false)));
                }
            }
            match best.1 {
                Some((i, true)) => self.swap_rows(t, i),
                Some((j, false)) => self.swap_cols(t, j),
                None => unreachable!("nonzero remainder is smaller than the pivot"),
            }
        }
    }

    /// Turns diag(a, b) at positions i, j into diag(gcd, lcm).
    fn fix_divisibility(&mut self, i: usize, j: usize) {
        let a = self.a[(i, i)].clone();
        let b = self.a[(j, j)].clone();
        let e = a.extended_gcd(&b);
        let (g, s, t) = (e.gcd, e.x, e.y);
        let (ag, bg) = (&a / &g, &b / &g);
        let nbg = -bg.clone();
        // rows: L = [[s, t], [-b/g, a/g]], L^-1 = [[a/g, -t], [b/g, s]]
        self.a.combine_rows(i, j, [&s, &t, &nbg, &ag]);
        self.u.combine_rows(i, j, [&s, &t, &nbg, &ag]);
        let nt = -t.clone();
        self.u_inv.combine_cols(i, j, [&ag, &nt, &bg, &s]);
        // cols: R = [[1, -tb/g], [1, sa/g]], R^-1 = [[sa/g, tb/g], [-1, 1]]
        let tbg = &t * &bg;
        let sag = &s * &ag;
        let ntbg = -tbg.clone();
        let one = BigInt::one();
        let mone = -BigInt::one();
        self.a.combine_cols(i, j, [&one, &ntbg, &one, &sag]);
        self.v.combine_cols(i, j, [&one, &ntbg, &one, &sag]);
        self.v_inv.combine_rows(i, j, [&sag, &tbg, &mone, &one]);
        debug_assert!(self.a[(i, j)].is_zero() && self.a[(j, i)].is_zero());
    }
}

pub fn smith_normal_form(a: &DenseMatrix<BigInt>) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.clone(),
        u: DenseMatrix::identity(m),
        u_inv: DenseMatrix::identity(m),
        v: DenseMatrix::identity(n),
        v_inv: DenseMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let Some((i, j)) = w.find_pivot(t) else { break };
        w.swap_rows(t, i);
        w.swap_cols(t, j);
        w.eliminate(t);
        t += 1;
    }
    let r = t;
    for i in 0..r {
        for j in i + 1..r {
            if !w.a[(j, j)].is_multiple_of(&w.a[(i, i)]) {
                w.fix_divisibility(i, j);
            }
        }
    }
    for i in 0..r {
        if w.a[(i, i)].is_negative() {
            w.a.negate_row(i);
            w.u.negate_row(i);
            w.u_inv.negate_col(i);
        }
    }
    let diagonal = (0..r).map(|i| w.a[(i, i)].clone()).collect();
    SmithDecomposition { u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv, diagonal, rows: m, cols: n }
}

/// Integer solution of `A x = b` if one exists.
pub fn solve_integral(snf: &SmithDecomposition, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ub = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); snf.cols];
    for (i, c) in ub.iter().enumerate() {
        if i < snf.rank() {
            let (q, rem) = c.div_rem(&snf.diagonal[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> DenseMatrix<BigInt> {
        DenseMatrix::from_rows(rows).map(|&x| BigInt::from(x))
    }

    fn check(a: &DenseMatrix<BigInt>) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d());
        assert_eq!(s.u.mul(&s.u_inv), DenseMatrix::identity(a.rows()));
        assert_eq!(s.v.mul(&s.v_inv), DenseMatrix::identity(a.cols()));
        for w in s.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(s.diagonal.iter().all(|d| d.is_positive()));
        s
    }

    #[test]
    fn coprime_diagonal() {
        let s = check(&m(vec![vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&m(vec![vec![0, 0, 0], vec![0, 0, 0]]));
        assert_eq!(s.rank(), 0);
        assert_eq!(s.u, DenseMatrix::identity(2));
        assert_eq!(s.v, DenseMatrix::identity(3));
    }

    #[test]
    fn empty_matrix() {
        let s = check(&DenseMatrix::zeros(0, 3));
        assert_eq!(s.rank(), 0);
        assert_eq!(s.kernel_basis().len(), 3);
    }

    #[test]
    fn classic_example() {
        let s = check(&m(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn integral_solve() {
        let a = m(vec![vec![2, 0], vec![0, 4]]);
        let s = smith_normal_form(&a);
        assert_eq!(solve_integral(&s, &[BigInt::from(4), BigInt::from(8)]), Some(vec![BigInt::from(2), BigInt::from(2)]));
        assert_eq!(solve_integral(&s, &[BigInt::from(1), BigInt::from(0)]), None);
    }
}
