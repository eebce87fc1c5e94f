//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use dfchar::complex::{build_standard, SimplicialComplex, DEFAULT_BUDGET};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const FIXTURES: [&str; 5] = ["sphere2", "torus", "rp2", "rp3", "cp2"];
pub const ORIENTED: [&str; 4] = ["sphere2", "torus", "rp3", "cp2"];

pub fn fixture(name: &str) -> Arc<SimplicialComplex> {
    build_standard(name, DEFAULT_BUDGET).unwrap_or_else(|e| panic!("{name}: {e}")).into_arc()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn dense_boundary(k: &SimplicialComplex, deg: usize) -> Vec<Vec<BigInt>> {
    let rows = k.count(deg - 1);
    let mut m = vec![vec![BigInt::zero(); k.count(deg)]; rows];
    for j in 0..k.count(deg) {
        for &(i, s) in k.faces(deg, j) {
            m[i][j] += s;
        }
    }
    m
}

/// Rank over ℚ by plain Gaussian elimination.
pub fn rational_rank(m: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for j in c..cols {
                    let t = &f * &a[rank][j];
                    a[r][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn gcd(a: BigInt, b: BigInt) -> BigInt {
    if b.is_zero() {
        a.abs()
    } else {
        gcd(b.clone(), a % b)
    }
}

/// Invariant factors as ratios of determinantal divisors (gcd of all `k × k`
/// minors); small matrices only.
pub fn invariant_factors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
                g = gcd(g, determinant(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Some rational solution of `A x = b`, by Gauss–Jordan elimination.
pub fn rational_solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(row, p);
        let inv = BigRational::one() / &m[row][c];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..=cols {
                    let t = &f * &m[row][j];
                    m[r][j] -= t;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

/// Dense coboundary `δ_deg` with rational entries.
pub fn dense_coboundary(k: &SimplicialComplex, deg: usize) -> Vec<Vec<BigRational>> {
    let b = dense_boundary(k, deg + 1);
    (0..k.count(deg + 1))
        .map(|i| (0..k.count(deg)).map(|j| BigRational::from_integer(b[j][i].clone())).collect())
        .collect()
}

/// Proptest settings without failure files, which integration tests cannot
/// place next to a crate root.
pub fn cases(n: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config { cases: n, failure_persistence: None, ..Default::default() }
}
