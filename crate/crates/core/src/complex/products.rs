//! Alexander–Whitney cup and cap products, and Poincaré duality.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Chain, Cochain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, solve_integral, DenseMatrix};
use crate::scalar::Ring;

/// `(u ∪ v)(σ) = u(σ[0..=p]) · v(σ[p..=p+q])`
pub fn cup_product<T: Ring>(k: &SimplicialComplex, u: &Cochain<T>, v: &Cochain<T>) -> Result<Cochain<T>> {
    u.check(k).map_err(|_| Error::MismatchedComplexes)?;
    v.check(k).map_err(|_| Error::MismatchedComplexes)?;
    let (p, q) = (u.degree, v.degree);
    let d = p + q;
    if d > k.dimension() {
        return Err(Error::DegreeOutOfRange { degree: d as i64, min: 0, max: k.dimension() as i64 });
    }
    let values = k
        .simplices(d)
        .iter()
        .map(|s| {
            let a = &u.values[k.index_of(&s[..=p]).unwrap()];
            if a.is_zero() {
                return T::zero();
            }
            let b = &v.values[k.index_of(&s[p..]).unwrap()];
            a.clone() * b.clone()
        })
        .collect();
    Ok(Cochain::new(d, values))
}

/// `u ⌢ [v0..vm] = u([v0..vp]) · [vp..vm]`, so that `⟨w, u ⌢ c⟩ = ⟨u ∪ w, c⟩`.
pub fn cap_product<T: Ring>(k: &SimplicialComplex, u: &Cochain<T>, c: &Chain<T>) -> Result<Chain<T>> {
    u.check(k).map_err(|_| Error::MismatchedComplexes)?;
    c.check(k).map_err(|_| Error::MismatchedComplexes)?;
    let (p, m) = (u.degree, c.degree);
    if p > m {
        return Err(Error::DegreeOutOfRange { degree: p as i64, min: 0, max: m as i64 });
    }
    let mut out = Chain::<T>::zero(k, m - p);
    for (s, coeff) in k.simplices(m).iter().zip(&c.values) {
        if coeff.is_zero() {
            continue;
        }
        let a = &u.values[k.index_of(&s[..=p]).unwrap()];
        if a.is_zero() {
            continue;
        }
        let j = k.index_of(&s[p..]).unwrap();
        out.values[j] = out.values[j].clone() + a.clone() * coeff.clone();
    }
    Ok(out)
}

/// Integer matrix of `u ↦ u ⌢ [X]` from `C^p` to `C_{n-p}`.
pub(crate) fn cap_matrix(k: &SimplicialComplex, p: usize) -> Result<DenseMatrix<BigInt>> {
    let fund = k.fundamental_cycle().ok_or(Error::Unoriented)?;
    let n = k.dimension();
    let mut m = DenseMatrix::zeros(k.count(n - p), k.count(p));
    for (s, &e) in k.simplices(n).iter().zip(fund) {
        let i = k.index_of(&s[p..]).unwrap();
        let j = k.index_of(&s[..=p]).unwrap();
        m[(i, j)] += e;
    }
    Ok(m)
}

/// An integral `k`-cocycle `u` with `u ⌢ [X]` homologous to the
/// `(n-k)`-cycle `z`.
///
/// Solves `δu = 0, u ⌢ [X] - ∂y = z` over the integers via the Smith form.
pub fn poincare_dual(k: &SimplicialComplex, z: &Chain<BigInt>) -> Result<Cochain<BigInt>> {
    let n = k.dimension();
    if k.fundamental_cycle().is_none() {
        return Err(Error::Unoriented);
    }
    z.check(k)?;
    if z.degree > n {
        return Err(Error::DegreeOutOfRange { degree: z.degree as i64, min: 0, max: n as i64 });
    }
    if !z.is_cycle(k) {
        return Err(Error::NotACycle);
    }
    let deg = n - z.degree;
    let cap = cap_matrix(k, deg)?;
    let (ck, ck1) = (k.count(deg), k.count(deg + 1));
    let cy = k.count(z.degree + 1);
    let rows = ck1 + k.count(z.degree);
    let mut sys = DenseMatrix::zeros(rows, ck + cy);
    for (i, j, &v) in k.boundary(deg + 1).triplets() {
        // δ_deg = ∂_{deg+1}ᵀ
        sys[(j, i)] = BigInt::from(v);
    }
    for i in 0..cap.rows() {
        for j in 0..cap.cols() {
            sys[(ck1 + i, j)] = cap[(i, j)].clone();
        }
    }
    if z.degree < n {
        for (i, j, &v) in k.boundary(z.degree + 1).triplets() {
            sys[(ck1 + i, ck + j)] = BigInt::from(-v);
        }
    }
    let mut rhs = vec![BigInt::zero(); ck1];
    rhs.extend(z.values.iter().cloned());
    let snf = smith_normal_form(&sys);
    let sol = solve_integral(&snf, &rhs)
        .ok_or_else(|| Error::Unsupported("no integral Poincaré dual found".into()))?;
    Ok(Cochain::new(deg, sol[..ck].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{circle, sphere};

    #[test]
    fn unit_of_cup() {
        let s = sphere(2);
        let one = Cochain::<i64>::new(0, vec![1; 4]);
        let v = Cochain::<i64>::new(1, (0..6).collect());
        assert_eq!(cup_product(&s, &one, &v).unwrap(), v);
        assert_eq!(cup_product(&s, &v, &one).unwrap(), v);
    }

    #[test]
    fn cup_degree_overflow() {
        let c = circle(3);
        let v = Cochain::<i64>::new(1, vec![1, 0, 0]);
        assert!(cup_product(&c, &v, &v).is_err());
    }

    #[test]
    fn cap_with_zero_cochain_degree_is_scaling() {
        let c = circle(3);
        let one = Cochain::<i64>::new(0, vec![2, 2, 2]);
        let z = Chain::<i64>::new(1, vec![1, -1, 1]);
        assert_eq!(cap_product(&c, &one, &z).unwrap().values, vec![2, -2, 2]);
    }

    #[test]
    fn dual_of_a_point_on_the_circle() {
        let c = circle(3);
        let z = Chain::<BigInt>::basis(&c, 0, 0);
        let u = poincare_dual(&c, &z).unwrap();
        let fund = Chain::fundamental(&c).unwrap();
        assert_eq!(u.evaluate(&fund), BigInt::from(1));
        assert!(u.coboundary(&c).is_zero());
    }
}
