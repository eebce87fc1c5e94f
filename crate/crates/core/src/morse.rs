//! Discrete Morse theory: acyclic matchings, the Morse complex on critical
//! cells, the flow projection `P`, the homotopy `T` with
//! `δT + Tδ = I - P`, and Morse sparks `(T φ, P φ)`.
//!
//! Chain-side operators come from algebraic Morse theory: with `A` the block
//! of `∂` from upper matched cells to lower matched cells, `h = ι₊ A⁻¹ π₋`
//! and `P = 1 - ∂h - h∂`. The cochain operators are the transposes.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::cohomology::{homology_data, GroupStructure};
use crate::complex::{as_simplex, Chain, Cochain, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, DenseMatrix};
use crate::scalar::{format_rational, Ring};
use crate::spark::DiscreteSpark;

/// An acyclic matching of cells `σ < τ` with `dim τ = dim σ + 1`.
#[derive(Clone, Debug)]
pub struct MorseMatching {
    complex: Arc<SimplicialComplex>,
    /// `up[k][σ]`: the `(k+1)`-cell matched with the `k`-cell `σ`.
    up: Vec<Vec<Option<usize>>>,
    /// `down[k][τ]`: the `(k-1)`-cell matched with the `k`-cell `τ`.
    down: Vec<Vec<Option<usize>>>,
    /// Lower `k`-cells ordered so that solving along the flow never revisits
    /// a cell.
    order: Vec<Vec<usize>>,
}

impl PartialEq for MorseMatching {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.complex, &other.complex) && self.up == other.up
    }
}

fn facet_sign(k: &SimplicialComplex, deg: usize, tau: usize, sigma: usize) -> Option<i64> {
    k.faces(deg, tau).iter().find(|(f, _)| *f == sigma).map(|(_, s)| *s)
}

impl MorseMatching {
    /// The empty matching: every cell is critical.
    pub fn empty(complex: Arc<SimplicialComplex>) -> Self {
        let n = complex.dimension();
        let up = (0..=n).map(|k| vec![None; complex.count(k)]).collect();
        let down = (0..=n).map(|k| vec![None; complex.count(k)]).collect();
        MorseMatching { complex, up, down, order: vec![Vec::new(); n + 1] }
    }

    /// Validates a list of `(k, σ, τ)` index pairs.
    pub fn from_indices(complex: Arc<SimplicialComplex>, pairs: &[(usize, usize, usize)]) -> Result<Self> {
        let mut m = Self::empty(complex);
        let n = m.complex.dimension();
        for &(k, s, t) in pairs {
            if k >= n || s >= m.complex.count(k) || t >= m.complex.count(k + 1) {
                return Err(Error::InvalidMatching(format!("pair ({k}, {s}, {t}) out of range")));
            }
            if facet_sign(&m.complex, k + 1, t, s).is_none() {
                return Err(Error::InvalidMatching(format!(
                    "{:?} is not a facet of {:?}",
                    m.complex.simplex(k, s),
                    m.complex.simplex(k + 1, t)
                )));
            }
            if m.is_matched(k, s) || m.is_matched(k + 1, t) {
                return Err(Error::InvalidMatching(format!(
                    "cell matched twice in pair {:?}, {:?}",
                    m.complex.simplex(k, s),
                    m.complex.simplex(k + 1, t)
                )));
            }
            m.up[k][s] = Some(t);
            m.down[k + 1][t] = Some(s);
        }
        for k in 0..n {
            m.order[k] = m.flow_order(k).ok_or_else(|| Error::InvalidMatching(format!("cycle in degree {k}")))?;
        }
        Ok(m)
    }

    /// Validates pairs given as vertex lists.
    pub fn new(complex: Arc<SimplicialComplex>, pairs: &[(Simplex, Simplex)]) -> Result<Self> {
        let mut idx = Vec::with_capacity(pairs.len());
        for (s, t) in pairs {
            if s.is_empty() || t.len() != s.len() + 1 {
                return Err(Error::InvalidMatching(format!("{s:?}, {t:?} differ in dimension by other than one")));
            }
            let k = s.len() - 1;
            let si = complex.index_of(s).ok_or_else(|| Error::InvalidMatching(format!("unknown cell {s:?}")))?;
            let ti = complex.index_of(t).ok_or_else(|| Error::InvalidMatching(format!("unknown cell {t:?}")))?;
            idx.push((k, si, ti));
        }
        Self::from_indices(complex, &idx)
    }

    /// Deterministic greedy matching: each unmatched cell, in degree then
    /// lexicographic order, takes its first unmatched coface that keeps the
    /// matching acyclic.
    pub fn greedy(complex: Arc<SimplicialComplex>) -> Self {
        let mut m = Self::empty(complex);
        let k0 = m.complex.clone();
        for k in 0..k0.dimension() {
            let mut cofaces = vec![Vec::new(); k0.count(k)];
            for t in 0..k0.count(k + 1) {
                for &(f, _) in k0.faces(k + 1, t) {
                    cofaces[f].push(t);
                }
            }
            for s in 0..k0.count(k) {
                if m.is_matched(k, s) {
                    continue;
                }
                for &t in &cofaces[s] {
                    if m.down[k + 1][t].is_none() && !m.reaches(k, t, s) {
                        m.up[k][s] = Some(t);
                        m.down[k + 1][t] = Some(s);
                        break;
                    }
                }
            }
            m.order[k] = m.flow_order(k).expect("greedy keeps the matching acyclic");
        }
        m
    }

    pub fn from_json(complex: Arc<SimplicialComplex>, doc: &Value) -> Result<Self> {
        let pairs = doc
            .get("pairs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("matching needs a \"pairs\" array".into()))?;
        let mut out = Vec::with_capacity(pairs.len());
        for p in pairs {
            let p = p.as_array().filter(|p| p.len() == 2).ok_or_else(|| Error::Parse("pair must be [σ, τ]".into()))?;
            let mut s = as_simplex(&p[0])?;
            let mut t = as_simplex(&p[1])?;
            s.sort_unstable();
            t.sort_unstable();
            out.push((s, t));
        }
        Self::new(complex, &out)
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self.pairs().into_iter().map(|(s, t)| json!([s, t])).collect();
        json!({ "pairs": pairs })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    fn is_matched(&self, k: usize, i: usize) -> bool {
        self.up[k][i].is_some() || self.down[k][i].is_some()
    }

    /// Pairs as vertex lists, by degree and index.
    pub fn pairs(&self) -> Vec<(Simplex, Simplex)> {
        let mut out = Vec::new();
        for (k, ups) in self.up.iter().enumerate() {
            for (s, t) in ups.iter().enumerate() {
                if let Some(t) = t {
                    out.push((self.complex.simplex(k, s).clone(), self.complex.simplex(k + 1, *t).clone()));
                }
            }
        }
        out
    }

    /// Unmatched `k`-cells.
    pub fn critical(&self, k: usize) -> Vec<usize> {
        (0..self.complex.count(k)).filter(|&i| !self.is_matched(k, i)).collect()
    }

    pub fn critical_counts(&self) -> Vec<usize> {
        (0..=self.complex.dimension()).map(|k| self.critical(k).len()).collect()
    }

    pub fn critical_cells(&self) -> Vec<Simplex> {
        (0..=self.complex.dimension())
            .flat_map(|k| self.critical(k).into_iter().map(move |i| (k, i)))
            .map(|(k, i)| self.complex.simplex(k, i).clone())
            .collect()
    }

    /// Lower `k`-cells reachable from `τ` in the flow digraph
    /// `σ → σ'` (σ' a facet of `up(σ)`), tested for `target`.
    fn reaches(&self, k: usize, tau: usize, target: usize) -> bool {
        let mut seen = vec![false; self.complex.count(k)];
        let mut stack: Vec<usize> =
            self.complex.faces(k + 1, tau).iter().map(|(f, _)| *f).filter(|&f| f != target).collect();
        while let Some(s) = stack.pop() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            if let Some(t) = self.up[k][s] {
                for &(f, _) in self.complex.faces(k + 1, t) {
                    if f == target {
                        return true;
                    }
                    if f != s {
                        stack.push(f);
                    }
                }
            }
        }
        false
    }

    /// Topological order of the lower `k`-cells, or `None` on a cycle.
    fn flow_order(&self, k: usize) -> Option<Vec<usize>> {
        let c = self.complex.count(k);
        let lower: Vec<usize> = (0..c).filter(|&s| self.up[k][s].is_some()).collect();
        let mut indeg = vec![0usize; c];
        let succ = |s: usize| -> Vec<usize> {
            let t = self.up[k][s].unwrap();
            self.complex
                .faces(k + 1, t)
                .iter()
                .map(|(f, _)| *f)
                .filter(|&f| f != s && self.up[k][f].is_some())
                .collect()
        };
        for &s in &lower {
            for f in succ(s) {
                indeg[f] += 1;
            }
        }
        let mut queue: VecDeque<usize> = lower.iter().copied().filter(|&s| indeg[s] == 0).collect();
        let mut order = Vec::with_capacity(lower.len());
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for f in succ(s) {
                indeg[f] -= 1;
                if indeg[f] == 0 {
                    queue.push_back(f);
                }
            }
        }
        (order.len() == lower.len()).then_some(order)
    }

    /// `h_k : C_k → C_{k+1}`.
    fn h_chain<T: Ring>(&self, k: usize, x: &[T]) -> Vec<T> {
        let n = self.complex.dimension();
        if k >= n {
            return Vec::new();
        }
        let mut r = x.to_vec();
        let mut out = vec![T::zero(); self.complex.count(k + 1)];
        for &s in &self.order[k] {
            if r[s].is_zero() {
                continue;
            }
            let t = self.up[k][s].unwrap();
            let eps = facet_sign(&self.complex, k + 1, t, s).unwrap();
            let c = r[s].clone() * T::from_sign(eps);
            for &(f, sign) in self.complex.faces(k + 1, t) {
                r[f] = r[f].clone() - c.clone() * T::from_sign(sign);
            }
            out[t] = out[t].clone() + c;
        }
        out
    }

    /// `T_k = h_{k-1}ᵀ : C^k → C^{k-1}`.
    fn h_cochain<T: Ring>(&self, k: usize, u: &[T]) -> Vec<T> {
        if k == 0 {
            return Vec::new();
        }
        let d = k - 1;
        let mut w = vec![T::zero(); self.complex.count(d)];
        for &s in self.order[d].iter().rev() {
            let t = self.up[d][s].unwrap();
            let mut acc = u[t].clone();
            let mut eps = 1;
            for &(f, sign) in self.complex.faces(k, t) {
                if f == s {
                    eps = sign;
                } else if self.up[d][f].is_some() {
                    acc = acc - w[f].clone() * T::from_sign(sign);
                }
            }
            w[s] = acc * T::from_sign(eps);
        }
        w
    }

    fn project_chain_values<T: Ring>(&self, k: usize, x: &[T]) -> Vec<T> {
        let mut out = x.to_vec();
        let hx = self.h_chain(k, x);
        if k < self.complex.dimension() {
            sub_assign(&mut out, &self.complex.apply_boundary(k + 1, &hx));
        }
        if k > 0 {
            let dx = self.complex.apply_boundary(k, x);
            sub_assign(&mut out, &self.h_chain(k - 1, &dx));
        }
        out
    }

    fn project_cochain_values<T: Ring>(&self, k: usize, u: &[T]) -> Vec<T> {
        let mut out = u.to_vec();
        if k > 0 {
            let tu = self.h_cochain(k, u);
            sub_assign(&mut out, &self.complex.apply_coboundary(k - 1, &tu));
        }
        if k < self.complex.dimension() {
            let du = self.complex.apply_coboundary(k, u);
            sub_assign(&mut out, &self.h_cochain(k + 1, &du));
        }
        out
    }

    /// The chain homotopy `h`, raising degree by one.
    pub fn homotopy_chain<T: Ring>(&self, x: &Chain<T>) -> Result<Chain<T>> {
        x.check(&self.complex)?;
        Ok(Chain::new(x.degree + 1, self.h_chain(x.degree, &x.values)))
    }

    pub fn project_chain<T: Ring>(&self, x: &Chain<T>) -> Result<Chain<T>> {
        x.check(&self.complex)?;
        Ok(Chain::new(x.degree, self.project_chain_values(x.degree, &x.values)))
    }

    /// `T : Cᵏ → Cᵏ⁻¹`; degree-zero cochains have no image.
    pub fn homotopy<T: Ring>(&self, u: &Cochain<T>) -> Result<Cochain<T>> {
        u.check(&self.complex)?;
        if u.degree == 0 {
            return Err(Error::DegreeOutOfRange { degree: -1, min: 0, max: self.complex.dimension() as i64 });
        }
        Ok(Cochain::new(u.degree - 1, self.h_cochain(u.degree, &u.values)))
    }

    /// `P` on cochains.
    pub fn project<T: Ring>(&self, u: &Cochain<T>) -> Result<Cochain<T>> {
        u.check(&self.complex)?;
        Ok(Cochain::new(u.degree, self.project_cochain_values(u.degree, &u.values)))
    }

    /// `δT u + T δu - u + P u`, zero when the homotopy identity holds.
    pub fn identity_residual<T: Ring>(&self, u: &Cochain<T>) -> Result<Cochain<T>> {
        u.check(&self.complex)?;
        let k = u.degree;
        let mut out = self.project_cochain_values(k, &u.values);
        sub_assign(&mut out, &u.values);
        if k > 0 {
            let tu = self.h_cochain(k, &u.values);
            add_assign(&mut out, &self.complex.apply_coboundary(k - 1, &tu));
        }
        if k < self.complex.dimension() {
            let du = self.complex.apply_coboundary(k, &u.values);
            add_assign(&mut out, &self.h_cochain(k + 1, &du));
        }
        Ok(Cochain::new(k, out))
    }

    /// Matrix of `T_k : Cᵏ → Cᵏ⁻¹` (`k ≥ 1`).
    pub fn homotopy_matrix(&self, k: usize) -> DenseMatrix<BigInt> {
        let cols: Vec<Vec<BigInt>> = (0..self.complex.count(k))
            .map(|i| self.h_cochain(k, &Cochain::<BigInt>::basis(&self.complex, k, i).values))
            .collect();
        DenseMatrix::from_columns(self.complex.count(k - 1), &cols)
    }

    /// Matrix of `P` on `Cᵏ`.
    pub fn projection_matrix(&self, k: usize) -> DenseMatrix<BigInt> {
        let cols: Vec<Vec<BigInt>> = (0..self.complex.count(k))
            .map(|i| self.project_cochain_values(k, &Cochain::<BigInt>::basis(&self.complex, k, i).values))
            .collect();
        DenseMatrix::from_columns(self.complex.count(k), &cols)
    }

    /// `δ_{k-1} T_k + T_{k+1} δ_k = I - P_k` as an equality of integer
    /// matrices.
    pub fn identity_holds(&self, k: usize) -> bool {
        let c = self.complex.count(k);
        let mut lhs = DenseMatrix::<BigInt>::zeros(c, c);
        if k > 0 {
            let t = self.homotopy_matrix(k);
            let d = self.complex.boundary(k).map(|&v| BigInt::from(v)).to_dense().transpose();
            lhs = add_dense(&lhs, &d.mul(&t));
        }
        if k < self.complex.dimension() {
            let t = self.homotopy_matrix(k + 1);
            let d = self.complex.boundary(k + 1).map(|&v| BigInt::from(v)).to_dense().transpose();
            lhs = add_dense(&lhs, &t.mul(&d));
        }
        let p = self.projection_matrix(k);
        let mut rhs = DenseMatrix::<BigInt>::identity(c);
        for i in 0..c {
            for j in 0..c {
                rhs[(i, j)] = &rhs[(i, j)] - &p[(i, j)];
            }
        }
        lhs == rhs
    }
}

fn sub_assign<T: Ring>(a: &mut [T], b: &[T]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = x.clone() - y.clone();
    }
}

fn add_assign<T: Ring>(a: &mut [T], b: &[T]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = x.clone() + y.clone();
    }
}

fn add_dense(a: &DenseMatrix<BigInt>, b: &DenseMatrix<BigInt>) -> DenseMatrix<BigInt> {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(i, j)] = &a[(i, j)] + &b[(i, j)];
        }
    }
    out
}

/// The chain complex on critical cells.
#[derive(Clone, Debug, PartialEq)]
pub struct MorseComplex {
    /// Critical cells by degree, as indices into the complex.
    pub critical: Vec<Vec<usize>>,
    /// `boundary[k]`: critical `k`-cells to critical `(k-1)`-cells; entry 0
    /// has no rows.
    pub boundary: Vec<DenseMatrix<BigInt>>,
}

/// `∂_M = π₀ ∂ (1 - h∂) ι₀`.
pub fn morse_complex(m: &MorseMatching) -> MorseComplex {
    let k0 = &m.complex;
    let n = k0.dimension();
    let critical: Vec<Vec<usize>> = (0..=n).map(|k| m.critical(k)).collect();
    let mut boundary = vec![DenseMatrix::zeros(0, critical[0].len())];
    for k in 1..=n {
        let pos: BTreeMap<usize, usize> = critical[k - 1].iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut d = DenseMatrix::zeros(critical[k - 1].len(), critical[k].len());
        for (j, &p) in critical[k].iter().enumerate() {
            let x = Chain::<BigInt>::basis(k0, k, p).values;
            let px = m.project_chain_values(k, &x);
            let bx = k0.apply_boundary(k, &px);
            for (&c, &i) in &pos {
                d[(i, j)] = bx[c].clone();
            }
        }
        boundary.push(d);
    }
    MorseComplex { critical, boundary }
}

impl MorseComplex {
    pub fn dimension(&self) -> usize {
        self.critical.len() - 1
    }

    pub fn is_chain_complex(&self) -> bool {
        (2..self.boundary.len()).all(|k| self.boundary[k - 1].mul(&self.boundary[k]).is_zero())
    }

    /// `H_k` of the Morse complex.
    pub fn homology(&self, k: usize) -> GroupStructure {
        let rank_out = if k == 0 { 0 } else { smith_normal_form(&self.boundary[k]).rank() };
        let (rank_in, torsion) = if k < self.dimension() {
            let s = smith_normal_form(&self.boundary[k + 1]);
            (s.rank(), s.torsion())
        } else {
            (0, Vec::new())
        };
        GroupStructure { free_rank: self.critical[k].len() - rank_out - rank_in, torsion }
    }

    /// Whether every `H_k` agrees with simplicial homology.
    pub fn matches_homology(&self, complex: &SimplicialComplex) -> Result<bool> {
        for k in 0..=self.dimension() {
            if homology_data(complex, k)?.structure != self.homology(k) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self, complex: &SimplicialComplex) -> Value {
        let critical: Vec<Value> = self
            .critical
            .iter()
            .enumerate()
            .map(|(k, cs)| Value::from(cs.iter().map(|&c| json!(complex.simplex(k, c))).collect::<Vec<_>>()))
            .collect();
        let boundary: Vec<Value> = self
            .boundary
            .iter()
            .map(|d| {
                Value::from(
                    d.to_rows()
                        .into_iter()
                        .map(|r| Value::from(r.into_iter().map(|x| Value::from(x.to_string())).collect::<Vec<_>>()))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        json!({ "critical": critical, "boundary": boundary })
    }
}

/// Values of `P φ` on the critical cells.
pub fn critical_periods(m: &MorseMatching, phi: &Cochain<BigRational>) -> Result<Vec<(Simplex, BigRational)>> {
    let p = m.project(phi)?;
    Ok(m.critical(phi.degree).into_iter().map(|c| (m.complex.simplex(phi.degree, c).clone(), p.values[c].clone())).collect())
}

/// `P φ = R` exactly.
pub fn is_thom_form(m: &MorseMatching, phi: &Cochain<BigRational>, r: &Cochain<BigInt>) -> Result<bool> {
    Ok(phi.degree == r.degree && m.project(phi)? == r.to_rational())
}

/// The spark `(T φ, P φ)` of a cocycle with integral critical periods.
pub fn morse_spark(m: &MorseMatching, phi: &Cochain<BigRational>) -> Result<DiscreteSpark> {
    phi.check(&m.complex)?;
    if phi.degree == 0 {
        return Err(Error::DegreeOutOfRange { degree: 0, min: 1, max: m.complex.dimension() as i64 });
    }
    if phi.degree < m.complex.dimension() && !phi.coboundary(&m.complex).is_zero() {
        return Err(Error::NotACocycle);
    }
    let p = m.project(phi)?;
    let critical = m.critical(phi.degree);
    let others = (0..p.len()).filter(|i| !critical.contains(i));
    for c in critical.iter().copied().chain(others) {
        if !p.values[c].is_integer() {
            return Err(Error::NonIntegralPeriod {
                cell: m.complex.simplex(phi.degree, c).clone(),
                value: format_rational(&p.values[c]),
            });
        }
    }
    let r = Cochain::new(phi.degree, p.values.iter().map(|q| q.to_integer()).collect());
    let a = m.homotopy(phi)?;
    DiscreteSpark::new(m.complex.clone(), a, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{circle, simplex, sphere};
    use num_traits::Zero;

    fn s1_hand() -> MorseMatching {
        let k = circle(3).into_arc();
        MorseMatching::new(k, &[(vec![1], vec![0, 1]), (vec![2], vec![1, 2])]).unwrap()
    }

    #[test]
    fn circle_hand_matching() {
        let m = s1_hand();
        assert_eq!(m.critical_cells(), vec![vec![0], vec![0, 2]]);
        let mc = morse_complex(&m);
        assert!(mc.boundary[1].is_zero());
        let v1 = Chain::<BigInt>::basis(m.complex(), 0, 1);
        assert_eq!(m.project_chain(&v1).unwrap(), Chain::<BigInt>::basis(m.complex(), 0, 0));
        for k in 0..=1 {
            assert!(m.identity_holds(k));
        }
    }

    #[test]
    fn cycle_rejected() {
        let k = circle(3).into_arc();
        let e = MorseMatching::new(k, &[(vec![0], vec![0, 1]), (vec![1], vec![1, 2]), (vec![2], vec![0, 2])]);
        assert!(matches!(e, Err(Error::InvalidMatching(_))));
    }

    #[test]
    fn greedy_on_simplex_is_perfect() {
        let m = MorseMatching::greedy(simplex(3).into_arc());
        assert_eq!(m.critical_counts(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn greedy_on_sphere() {
        let k = sphere(2).into_arc();
        let m = MorseMatching::greedy(k.clone());
        assert_eq!(m.critical_counts(), vec![1, 0, 1]);
        let mc = morse_complex(&m);
        assert!(mc.is_chain_complex());
        assert!(mc.matches_homology(&k).unwrap());
    }

    #[test]
    fn circle_spark() {
        let m = s1_hand();
        let phi = Cochain::new(1, vec![BigRational::zero(), BigRational::from_integer((-1).into()), BigRational::zero()]);
        let s = morse_spark(&m, &phi).unwrap();
        assert_eq!(s.r().values, vec![0.into(), (-1).into(), 0.into()]);
        assert_eq!(s.phi(), phi);
        let half = phi.scale(&BigRational::new(1.into(), 2.into()));
        assert!(matches!(morse_spark(&m, &half), Err(Error::NonIntegralPeriod { .. })));
    }
}
