use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conjugate gradients for a symmetric positive definite operator.
///
/// Stops when the max-norm of the residual drops below `tol`; returns the
/// solution and that residual.
pub fn conjugate_gradient(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, f64)> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let max_norm = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max_norm(&r) <= tol {
        return Ok((x, max_norm(&r)));
    }
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for it in 0..max_iter {
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::NoConvergence { residual: max_norm(&r) });
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        // Recompute the true residual now and then to avoid drift.
        if it % 50 == 49 {
            let ax = apply(&x);
            for i in 0..n {
                r[i] = b[i] - ax[i];
            }
        }
        let res = max_norm(&r);
        if res <= tol {
            let ax = apply(&x);
            let true_res = max_norm(&b.iter().zip(&ax).map(|(u, v)| u - v).collect::<Vec<_>>());
            if true_res <= tol {
                return Ok((x, true_res));
            }
            r = b.iter().zip(&ax).map(|(u, v)| u - v).collect();
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    Err(Error::NoConvergence { residual: max_norm(&r) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_spd_system() {
        let a = [[4.0, 1.0], [1.0, 3.0]];
        let apply = |v: &[f64]| vec![a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]];
        let (x, res) = conjugate_gradient(apply, &[1.0, 2.0], 1e-12, 100).unwrap();
        assert!(res <= 1e-12);
        assert!((x[0] - 1.0 / 11.0).abs() < 1e-10);
        assert!((x[1] - 7.0 / 11.0).abs() < 1e-10);
    }
}
