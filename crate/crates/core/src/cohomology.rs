//! Integral (co)homology with generators, torsion witnesses and class
//! coordinates, all derived from Smith normal forms of the boundary maps.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::complex::{Chain, Cochain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{smith_normal_form, solve_integral, DenseMatrix, SmithDecomposition, SparseMatrix};

/// Isomorphism type of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupStructure {
    pub free_rank: usize,
    /// Invariant factors, each at least 2 and dividing the next.
    pub torsion: Vec<BigInt>,
}

impl GroupStructure {
    pub fn free(rank: usize) -> Self {
        GroupStructure { free_rank: rank, torsion: Vec::new() }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    /// Normalizes a list of cyclic orders (zeros mean `ℤ`) into invariant
    /// factors.
    pub fn from_cyclic(orders: &[BigInt]) -> Self {
        let free = orders.iter().filter(|d| d.is_zero()).count();
        let finite: Vec<&BigInt> = orders.iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
        let mut m = DenseMatrix::zeros(finite.len(), finite.len());
        for (i, d) in finite.iter().enumerate() {
            m[(i, i)] = (*d).abs();
        }
        let torsion = smith_normal_form(&m).torsion();
        GroupStructure { free_rank: free, torsion }
    }

    pub fn direct_sum(parts: &[GroupStructure]) -> Self {
        let mut orders = Vec::new();
        for p in parts {
            orders.extend(std::iter::repeat(BigInt::zero()).take(p.free_rank));
            orders.extend(p.torsion.iter().cloned());
        }
        Self::from_cyclic(&orders)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut orders = vec![BigInt::zero(); self.free_rank * other.free_rank];
        for t in &self.torsion {
            orders.extend(std::iter::repeat(t.clone()).take(other.free_rank));
        }
        for t in &other.torsion {
            orders.extend(std::iter::repeat(t.clone()).take(self.free_rank));
        }
        for a in &self.torsion {
            for b in &other.torsion {
                orders.push(a.gcd(b));
            }
        }
        Self::from_cyclic(&orders)
    }

    pub fn tor(&self, other: &Self) -> Self {
        let orders: Vec<BigInt> =
            self.torsion.iter().flat_map(|a| other.torsion.iter().map(move |b| a.gcd(b))).collect();
        Self::from_cyclic(&orders)
    }

    pub fn torsion_part(&self) -> Self {
        GroupStructure { free_rank: 0, torsion: self.torsion.clone() }
    }

    pub fn free_part(&self) -> Self {
        Self::free(self.free_rank)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// `ℤ²×ℤ₂`-style rendering; `0` for the trivial group.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("ℤ_{t}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("×")
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"free_rank": self.free_rank, "torsion": self.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()})
    }
}

/// `ker(out) / im(in)` for a pair of composable integer matrices, with the
/// data needed to compute class coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub structure: GroupStructure,
    /// Generators, free ones first, then one per torsion factor.
    pub generators: Vec<Vec<BigInt>>,
    /// For the torsion generator `g_i` of order `d_i`: `w_i` with `in(w_i) = d_i g_i`.
    pub witnesses: Vec<Vec<BigInt>>,
    /// Lattice basis of `ker(out)`.
    pub kernel: Vec<Vec<BigInt>>,
    out_snf: Arc<SmithDecomposition>,
    /// `U'` of the second Smith form, acting on kernel coordinates.
    u2: DenseMatrix<BigInt>,
    /// Indices into the second diagonal: free ones, then torsion ones.
    free_idx: Vec<usize>,
    tors_idx: Vec<(usize, BigInt)>,
}

/// Coordinates of a class: integers on the free generators, residues on
/// the torsion generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCoordinates {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl ClassCoordinates {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }
}

impl Subquotient {
    /// Computes `ker(out) / im(in)`; `in_map` is `b × a`, the SNF of `out`
    /// (`c × b`) is supplied.
    pub fn compute(in_map: &SparseMatrix<i64>, out_snf: Arc<SmithDecomposition>) -> Self {
        let b = out_snf.cols;
        let r = out_snf.rank();
        let m = b - r;
        let kernel = out_snf.kernel_basis();
        // C = (V⁻¹ in)[r.., :]
        let a = in_map.cols();
        let mut c = DenseMatrix::zeros(m, a);
        for i in 0..m {
            let row = out_snf.v_inv.row(r + i);
            for (l, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, v) in in_map.row(l) {
                    c[(i, *j)] += x * v;
                }
            }
        }
        let s2 = smith_normal_form(&c);
        let r2 = s2.rank();
        // G = K U'⁻¹
        let gen = |i: usize| -> Vec<BigInt> {
            let mut g = vec![BigInt::zero(); b];
            for (l, kv) in kernel.iter().enumerate() {
                let coeff = &s2.u_inv[(l, i)];
                if coeff.is_zero() {
                    continue;
                }
                for (t, x) in kv.iter().enumerate() {
                    if !x.is_zero() {
                        g[t] += coeff * x;
                    }
                }
            }
            g
        };
        let free_idx: Vec<usize> = (r2..m).collect();
        let tors_idx: Vec<(usize, BigInt)> =
            (0..r2).filter(|&i| !s2.diagonal[i].is_one()).map(|i| (i, s2.diagonal[i].clone())).collect();
        let mut generators: Vec<Vec<BigInt>> = free_idx.iter().map(|&i| gen(i)).collect();
        let mut witnesses = Vec::new();
        for (i, _) in &tors_idx {
            generators.push(gen(*i));
            witnesses.push(s2.v.column(*i));
        }
        let structure = GroupStructure {
            free_rank: free_idx.len(),
            torsion: tors_idx.iter().map(|(_, d)| d.clone()).collect(),
        };
        Subquotient { structure, generators, witnesses, kernel, out_snf, u2: s2.u, free_idx, tors_idx }
    }

    /// Coordinates of an element of `ker(out)`, or `None` if `x` is not in
    /// the kernel.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<ClassCoordinates> {
        let r = self.out_snf.rank();
        let y = self.out_snf.v_inv.mul_vec(x);
        if y[..r].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let c = self.u2.mul_vec(&y[r..]);
        Some(ClassCoordinates {
            free: self.free_idx.iter().map(|&i| c[i].clone()).collect(),
            torsion: self.tors_idx.iter().map(|(i, d)| c[*i].mod_floor(d)).collect(),
        })
    }

    pub fn out_snf(&self) -> &SmithDecomposition {
        &self.out_snf
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    CoboundarySnf,
    BoundarySnf,
    Cohomology,
    Homology,
}

#[derive(Clone)]
enum Entry {
    Snf(Arc<SmithDecomposition>),
    Sub(Arc<Subquotient>),
}

/// Per-complex memo of Smith forms and (co)homology.
#[derive(Default)]
pub struct Cache {
    map: Mutex<HashMap<(Kind, usize), Entry>>,
    /// Unit-weight harmonic bases, filled by the Hodge engine.
    pub(crate) harmonic: Mutex<HashMap<usize, Arc<Vec<Vec<BigRational>>>>>,
}

impl Cache {
    fn get(&self, key: (Kind, usize)) -> Option<Entry> {
        self.map.lock().unwrap().get(&key).cloned()
    }

    fn put(&self, key: (Kind, usize), e: Entry) -> Entry {
        self.map.lock().unwrap().entry(key).or_insert(e).clone()
    }
}

fn dense(m: &SparseMatrix<i64>) -> DenseMatrix<BigInt> {
    let mut d = DenseMatrix::zeros(m.rows(), m.cols());
    for (i, j, v) in m.triplets() {
        d[(i, j)] = BigInt::from(*v);
    }
    d
}

/// Smith form of `δ_k : C^k → C^{k+1}` (`0 ≤ k ≤ n`).
pub fn coboundary_snf(k: &SimplicialComplex, deg: usize) -> Arc<SmithDecomposition> {
    let key = (Kind::CoboundarySnf, deg);
    if let Some(Entry::Snf(s)) = k.cache.get(key) {
        return s;
    }
    let s = Arc::new(smith_normal_form(&dense(&k.boundary(deg + 1).transpose())));
    match k.cache.put(key, Entry::Snf(s)) {
        Entry::Snf(s) => s,
        Entry::Sub(_) => unreachable!(),
    }
}

/// Smith form of `∂_k : C_k → C_{k-1}` (`0 ≤ k ≤ n + 1`).
pub fn boundary_snf(k: &SimplicialComplex, deg: usize) -> Arc<SmithDecomposition> {
    let key = (Kind::BoundarySnf, deg);
    if let Some(Entry::Snf(s)) = k.cache.get(key) {
        return s;
    }
    let s = Arc::new(smith_normal_form(&dense(k.boundary(deg))));
    match k.cache.put(key, Entry::Snf(s)) {
        Entry::Snf(s) => s,
        Entry::Sub(_) => unreachable!(),
    }
}

fn check_degree(k: &SimplicialComplex, deg: usize) -> Result<()> {
    if deg > k.dimension() {
        return Err(Error::DegreeOutOfRange { degree: deg as i64, min: 0, max: k.dimension() as i64 });
    }
    Ok(())
}

/// `Hᵏ(K; ℤ) = ker δ_k / im δ_{k-1}` with generators and class coordinates.
pub fn cohomology_data(k: &SimplicialComplex, deg: usize) -> Result<Arc<Subquotient>> {
    check_degree(k, deg)?;
    let key = (Kind::Cohomology, deg);
    if let Some(Entry::Sub(s)) = k.cache.get(key) {
        return Ok(s);
    }
    let in_map = k.boundary(deg).transpose();
    let s = Arc::new(Subquotient::compute(&in_map, coboundary_snf(k, deg)));
    match k.cache.put(key, Entry::Sub(s)) {
        Entry::Sub(s) => Ok(s),
        Entry::Snf(_) => unreachable!(),
    }
}

/// `H_k(K; ℤ) = ker ∂_k / im ∂_{k+1}`.
pub fn homology_data(k: &SimplicialComplex, deg: usize) -> Result<Arc<Subquotient>> {
    check_degree(k, deg)?;
    let key = (Kind::Homology, deg);
    if let Some(Entry::Sub(s)) = k.cache.get(key) {
        return Ok(s);
    }
    let s = Arc::new(Subquotient::compute(k.boundary(deg + 1), boundary_snf(k, deg)));
    match k.cache.put(key, Entry::Sub(s)) {
        Entry::Sub(s) => Ok(s),
        Entry::Snf(_) => unreachable!(),
    }
}

/// `Hᵏ(K; ℤ)` with generator cocycles (free first) and, for each torsion
/// generator `g` of order `m`, an integral `S` with `m·g = δS`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianGroupStructure {
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub generators: Vec<Cochain<BigInt>>,
    pub witnesses: Vec<Cochain<BigInt>>,
}

impl AbelianGroupStructure {
    pub fn structure(&self) -> GroupStructure {
        GroupStructure { free_rank: self.free_rank, torsion: self.torsion.clone() }
    }

    pub fn free_generators(&self) -> &[Cochain<BigInt>] {
        &self.generators[..self.free_rank]
    }

    pub fn torsion_generators(&self) -> &[Cochain<BigInt>] {
        &self.generators[self.free_rank..]
    }

    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self
            .generators
            .iter()
            .map(|g| crate::complex::cochain_to_json(&g.to_rational(), true))
            .collect();
        json!({
            "free_rank": self.free_rank,
            "torsion": self.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "generators": gens,
        })
    }
}

pub fn cohomology_z(k: &SimplicialComplex, deg: usize) -> Result<AbelianGroupStructure> {
    let d = cohomology_data(k, deg)?;
    Ok(AbelianGroupStructure {
        degree: deg,
        free_rank: d.structure.free_rank,
        torsion: d.structure.torsion.clone(),
        generators: d.generators.iter().map(|g| Cochain::new(deg, g.clone())).collect(),
        witnesses: d.witnesses.iter().map(|w| Cochain::new(deg.saturating_sub(1), w.clone())).collect(),
    })
}

pub fn homology_z(k: &SimplicialComplex, deg: usize) -> Result<GroupStructure> {
    Ok(homology_data(k, deg)?.structure.clone())
}

/// `Hᵏ(K; S¹) ≅ (S¹)^{b_k} × Tor Hᵏ⁺¹(K; ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleCohomology {
    pub torus_rank: usize,
    pub torsion: Vec<BigInt>,
}

pub fn cohomology_circle(k: &SimplicialComplex, deg: usize) -> Result<CircleCohomology> {
    check_degree(k, deg)?;
    let torus_rank = cohomology_data(k, deg)?.structure.free_rank;
    let torsion =
        if deg < k.dimension() { cohomology_data(k, deg + 1)?.structure.torsion.clone() } else { Vec::new() };
    Ok(CircleCohomology { torus_rank, torsion })
}

/// Lattice basis of the integral `deg`-cycles.
pub fn cycle_lattice_basis(k: &SimplicialComplex, deg: usize) -> Result<Vec<Chain<BigInt>>> {
    check_degree(k, deg)?;
    Ok(homology_data(k, deg)?.kernel.iter().map(|z| Chain::new(deg, z.clone())).collect())
}

/// Betti numbers over ℚ.
pub fn betti_numbers(k: &SimplicialComplex) -> Vec<usize> {
    (0..=k.dimension()).map(|d| cohomology_data(k, d).unwrap().structure.free_rank).collect()
}

/// `rank δ_k` for `0 ≤ k ≤ n` (zero at `k = n`).
pub fn coboundary_rank(k: &SimplicialComplex, deg: usize) -> usize {
    if deg >= k.dimension() {
        return 0;
    }
    coboundary_snf(k, deg).rank()
}

/// Class of an integral cocycle in `Hᵏ(K; ℤ)`.
pub fn class_of(k: &SimplicialComplex, u: &Cochain<BigInt>) -> Result<ClassCoordinates> {
    cohomology_data(k, u.degree)?.coordinates(&u.values).ok_or(Error::NotACocycle)
}

/// Integral `S` with `δS = u`, if `u` is an integral coboundary.
pub fn integral_primitive(k: &SimplicialComplex, u: &Cochain<BigInt>) -> Option<Cochain<BigInt>> {
    if u.degree == 0 {
        return u.is_zero().then(|| Cochain::new(0, Vec::new()));
    }
    let snf = coboundary_snf(k, u.degree - 1);
    solve_integral(&snf, &u.values).map(|s| Cochain::new(u.degree - 1, s))
}

/// A rational `a` with `δa = b`, if `b` is a rational coboundary.
pub fn rational_primitive(k: &SimplicialComplex, b: &Cochain<BigRational>) -> Option<Cochain<BigRational>> {
    if b.degree == 0 {
        return b.is_zero().then(|| Cochain::new(0, Vec::new()));
    }
    let snf = coboundary_snf(k, b.degree - 1);
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    let mut ub = vec![BigRational::zero(); snf.rows];
    for (i, u) in ub.iter_mut().enumerate() {
        for (x, bv) in snf.u.row(i).iter().zip(&b.values) {
            if !x.is_zero() && !bv.is_zero() {
                *u += q(x) * bv;
            }
        }
    }
    if ub[snf.rank()..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let y: Vec<BigRational> = (0..snf.cols)
        .map(|i| if i < snf.rank() { ub[i].clone() / q(&snf.diagonal[i]) } else { BigRational::zero() })
        .collect();
    let mut a = vec![BigRational::zero(); snf.cols];
    for (i, ai) in a.iter_mut().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            let v = &snf.v[(i, j)];
            if !v.is_zero() && !yj.is_zero() {
                *ai += q(v) * yj;
            }
        }
    }
    Some(Cochain::new(b.degree - 1, a))
}

/// `Hᵏ(X × Y; ℤ)` from the cohomology of the factors (Künneth, with Tor).
pub fn kunneth_structure(a: &[GroupStructure], b: &[GroupStructure], k: usize) -> GroupStructure {
    let mut parts = Vec::new();
    for i in 0..a.len() {
        if k >= i && k - i < b.len() {
            parts.push(a[i].tensor(&b[k - i]));
        }
        if k + 1 >= i && k + 1 - i < b.len() {
            parts.push(a[i].tor(&b[k + 1 - i]));
        }
    }
    GroupStructure::direct_sum(&parts)
}

/// All integral cohomology groups of `K`.
pub fn cohomology_structures(k: &SimplicialComplex) -> Vec<GroupStructure> {
    (0..=k.dimension()).map(|d| cohomology_data(k, d).unwrap().structure.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{circle, rp2, sphere, torus_grid};

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn invariant_factor_normalization() {
        let g = GroupStructure::from_cyclic(&[b(2), b(3), b(0), b(4)]);
        assert_eq!(g, GroupStructure { free_rank: 1, torsion: vec![b(2), b(12)] });
        assert_eq!(g.render(), "ℤ×ℤ_2×ℤ_12");
    }

    #[test]
    fn circle_and_sphere() {
        let c = circle(3);
        assert_eq!(cohomology_z(&c, 1).unwrap().free_rank, 1);
        let s = sphere(2);
        assert!(cohomology_z(&s, 1).unwrap().structure().is_trivial());
        assert_eq!(betti_numbers(&s), vec![1, 0, 1]);
    }

    #[test]
    fn projective_plane_torsion() {
        let p = rp2();
        assert_eq!(homology_z(&p, 1).unwrap(), GroupStructure { free_rank: 0, torsion: vec![b(2)] });
        let h2 = cohomology_z(&p, 2).unwrap();
        assert_eq!(h2.torsion, vec![b(2)]);
        let g = &h2.generators[0];
        let s = &h2.witnesses[0];
        assert_eq!(s.coboundary(&p), g.scale(&b(2)));
    }

    #[test]
    fn class_coordinates_detect_coboundaries() {
        let t = torus_grid(3);
        let h1 = cohomology_z(&t, 1).unwrap();
        let g = &h1.generators[0];
        let c = class_of(&t, g).unwrap();
        assert_eq!(c.free.iter().filter(|x| !x.is_zero()).count(), 1);
        let f = Cochain::new(0, (0..9).map(b).collect::<Vec<_>>());
        let shifted = g.add(&f.coboundary(&t));
        assert_eq!(class_of(&t, &shifted).unwrap(), c);
        assert!(class_of(&t, &f.coboundary(&t)).unwrap().is_zero());
    }

    #[test]
    fn kunneth_examples() {
        let rp3 = [GroupStructure::free(1), GroupStructure::trivial(), GroupStructure { free_rank: 0, torsion: vec![b(2)] }, GroupStructure::free(1)];
        assert_eq!(kunneth_structure(&rp3, &rp3, 2).torsion, vec![b(2), b(2)]);
        let pt = [GroupStructure::free(1)];
        for k in 0..4 {
            assert_eq!(kunneth_structure(&rp3, &pt, k), rp3[k]);
        }
    }
}
