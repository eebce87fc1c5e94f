//! Exact solutions of nonsingular integer systems by p-adic lifting and
//! rational reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SparseMatrix;

const PRIMES: [u64; 8] =
    [2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543, 2147483497];

/// Solver for `A x = b` with `A` square, integral and nonsingular; the
/// factorization mod `p` is reused across right-hand sides.
#[derive(Clone, Debug)]
pub struct PadicSolver {
    a: SparseMatrix<BigInt>,
    p: u64,
    /// Packed `L` (unit diagonal) and `U` of the row-permuted matrix mod `p`.
    lu: Vec<u64>,
    inv_diag: Vec<u64>,
    perm: Vec<usize>,
    /// `log₂` of the column Hadamard bound of `A`.
    log2_hadamard: f64,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

fn factor_mod(a: &SparseMatrix<BigInt>, p: u64) -> Option<(Vec<u64>, Vec<u64>, Vec<usize>)> {
    let n = a.rows();
    let mut m = vec![0u64; n * n];
    for (i, j, v) in a.triplets() {
        m[i * n + j] = residue(v, p);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut inv_diag = vec![0u64; n];
    for c in 0..n {
        let piv = (c..n).find(|&r| m[r * n + c] != 0)?;
        if piv != c {
            for j in 0..n {
                m.swap(c * n + j, piv * n + j);
            }
            perm.swap(c, piv);
        }
        let inv = pow_mod(m[c * n + c], p - 2, p);
        inv_diag[c] = inv;
        for r in c + 1..n {
            let f = m[r * n + c];
            if f == 0 {
                continue;
            }
            let f = mul_mod(f, inv, p);
            m[r * n + c] = f;
            for j in c + 1..n {
                let u = m[c * n + j];
                if u != 0 {
                    m[r * n + j] = (m[r * n + j] + p - mul_mod(f, u, p)) % p;
                }
            }
        }
    }
    Some((m, inv_diag, perm))
}

impl PadicSolver {
    /// `None` when `A` is not square or is singular.
    pub fn new(a: SparseMatrix<BigInt>) -> Option<Self> {
        let n = a.rows();
        if a.cols() != n {
            return None;
        }
        let mut col_norm = vec![0f64; n];
        for (_, j, v) in a.triplets() {
            let f = v.to_f64().unwrap_or(f64::MAX);
            col_norm[j] += f * f;
        }
        let log2_hadamard = col_norm.iter().map(|s| 0.5 * s.max(1.0).log2()).sum();
        for &p in &PRIMES {
            if let Some((lu, inv_diag, perm)) = factor_mod(&a, p) {
                return Some(PadicSolver { a, p, lu, inv_diag, perm, log2_hadamard });
            }
        }
        None
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    fn solve_mod(&self, b: &[u64]) -> Vec<u64> {
        let (n, p) = (self.dim(), self.p);
        let mut y: Vec<u64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                let l = self.lu[i * n + j];
                if l != 0 && y[j] != 0 {
                    s = (s + p - mul_mod(l, y[j], p)) % p;
                }
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                if u != 0 && y[j] != 0 {
                    s = (s + p - mul_mod(u, y[j], p)) % p;
                }
            }
            y[i] = mul_mod(s, self.inv_diag[i], p);
        }
        y
    }

    /// The unique rational solution of `A x = b`, verified exactly.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigRational>> {
        let n = self.dim();
        if b.len() != n {
            return None;
        }
        if b.iter().all(Zero::is_zero) {
            return Some(vec![BigRational::zero(); n]);
        }
        let b_norm: f64 = b.iter().map(|x| x.to_f64().unwrap_or(f64::MAX).powi(2)).sum::<f64>().sqrt();
        let bits = 2.0 * self.log2_hadamard + b_norm.max(1.0).log2() + 2.0;
        let max_steps = (bits / (self.p as f64).log2()).ceil() as usize + 2;
        let p = BigInt::from(self.p);
        let mut r = b.to_vec();
        let mut acc = vec![BigInt::zero(); n];
        let mut pk = BigInt::one();
        let mut next_try = 2;
        for step in 1..=max_steps {
            let rm: Vec<u64> = r.iter().map(|x| residue(x, self.p)).collect();
            let xi = self.solve_mod(&rm);
            let xb: Vec<BigInt> = xi.iter().map(|&v| BigInt::from(v)).collect();
            for (a, x) in acc.iter_mut().zip(&xb) {
                if !x.is_zero() {
                    *a += x * &pk;
                }
            }
            let ax = self.a.mul_vec(&xb);
            for (ri, axi) in r.iter_mut().zip(ax) {
                *ri = (&*ri - axi) / &p;
            }
            pk *= &p;
            if step == next_try || step == max_steps {
                next_try *= 2;
                if let Some(x) = reconstruct_all(&acc, &pk) {
                    if self.verify(&x, b) {
                        return Some(x);
                    }
                }
            }
        }
        None
    }

    fn verify(&self, x: &[BigRational], b: &[BigInt]) -> bool {
        let d = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let y: Vec<BigInt> = x.iter().map(|q| q.numer() * (&d / q.denom())).collect();
        self.a.mul_vec(&y).iter().zip(b).all(|(l, r)| *l == r * &d)
    }
}

/// `a/b ≡ u (mod m)` with `|a|, b ≤ √(m/2)`, if it exists.
pub fn rational_reconstruction(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

fn reconstruct_all(acc: &[BigInt], m: &BigInt) -> Option<Vec<BigRational>> {
    acc.iter().map(|u| rational_reconstruction(u, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn sparse(rows: &[&[i64]]) -> SparseMatrix<BigInt> {
        let n = rows.len();
        SparseMatrix::from_triplets(
            n,
            rows[0].len(),
            rows.iter().enumerate().flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, BigInt::from(v)))),
        )
    }

    #[test]
    fn reconstructs_small_fractions() {
        let m = BigInt::from(1_000_003i64);
        let u = (BigInt::from(2) * BigInt::from(3).modpow(&(&m - 2), &m)) % &m;
        assert_eq!(rational_reconstruction(&u, &m), Some(rat(2, 3)));
    }

    #[test]
    fn solves_against_oracle() {
        let a = sparse(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let s = PadicSolver::new(a).unwrap();
        let x = s.solve(&[BigInt::from(1), BigInt::from(0), BigInt::from(-2)]).unwrap();
        // Cramer's rule with det = 18
        assert_eq!(x, vec![rat(1, 2), rat(0, 1), rat(-1, 2)]);
    }

    #[test]
    fn rejects_singular() {
        assert!(PadicSolver::new(sparse(&[&[1, 2], &[2, 4]])).is_none());
    }
}
