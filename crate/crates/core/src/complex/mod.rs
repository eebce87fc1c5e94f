//! Finite simplicial complexes with sorted-tuple orientation.

mod builders;
mod chains;
mod io;
mod maps;
mod products;
mod subdivision;

pub use builders::{
    build_standard, circle, cp2, lens, point, product, product_size, rp2, rp3, simplex, sphere, torus_grid,
    torus_grid_loops, torus_surface, DEFAULT_BUDGET,
};
pub use chains::{Chain, Cochain};
pub(crate) use io::as_simplex;
pub use io::{cochain_from_json, cochain_to_json, complex_from_json, complex_to_json, load_complex};
pub use maps::{ChainTransfer, SimplicialMap};
pub use products::{cap_product, cup_product, poincare_dual};
pub use subdivision::barycentric_subdivide;

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

pub type Simplex = Vec<usize>;

/// A finite simplicial complex on vertices `0..vertex_count`.
///
/// Simplices of each dimension are stored sorted lexicographically; a
/// simplex is identified by `(dimension, index)`. Every vertex is a
/// 0-simplex.
pub struct SimplicialComplex {
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    /// `faces[k][j]`: the codimension-one faces of simplex `j` of dimension
    /// `k` with their incidence signs, in the order of omitted vertex.
    faces: Vec<Vec<Vec<(usize, i64)>>>,
    fundamental: Option<Vec<i64>>,
    pub(crate) cache: crate::cohomology::Cache,
    boundaries: Vec<OnceLock<SparseMatrix<i64>>>,
}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("f_vector", &self.f_vector())
            .field("oriented", &self.fundamental.is_some())
            .finish()
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices && self.fundamental == other.fundamental
    }
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        let mut c = Self::assemble(self.simplices.clone());
        c.fundamental = self.fundamental.clone();
        c
    }
}

impl SimplicialComplex {
    /// Closes the given simplices under faces. Vertices `0..vertex_count`
    /// are always present.
    pub fn from_facets(vertex_count: usize, facets: &[Simplex]) -> Result<Self> {
        let mut by_dim: Vec<std::collections::BTreeSet<Simplex>> = vec![Default::default()];
        for v in 0..vertex_count {
            by_dim[0].insert(vec![v]);
        }
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            if s.is_empty() {
                continue;
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("repeated vertex in {f:?}")));
            }
            if *s.last().unwrap() >= vertex_count {
                return Err(Error::InvalidComplex(format!("vertex out of range in {f:?}")));
            }
            let k = s.len() - 1;
            // all nonempty subsets
            let n = s.len();
            for mask in 1u64..(1u64 << n) {
                let sub: Simplex = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                let d = sub.len() - 1;
                while by_dim.len() <= d.max(k) {
                    by_dim.push(Default::default());
                }
                by_dim[d].insert(sub);
            }
        }
        Ok(Self::assemble(by_dim.into_iter().map(|s| s.into_iter().collect()).collect()))
    }

    /// Validates explicit per-dimension lists. Missing faces are an error
    /// unless `auto_close` is set.
    pub fn from_simplices(vertex_count: usize, lists: &[Vec<Simplex>], auto_close: bool) -> Result<Self> {
        let mut all = Vec::new();
        for (k, list) in lists.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for s in list {
                if s.len() != k + 1 {
                    return Err(Error::InvalidComplex(format!("simplex {s:?} listed in dimension {k}")));
                }
                let mut t = s.clone();
                t.sort_unstable();
                if !seen.insert(t.clone()) {
                    return Err(Error::DuplicateSimplex(t));
                }
                all.push(t);
            }
        }
        if !auto_close {
            let present: std::collections::HashSet<&Simplex> = all.iter().collect();
            for s in &all {
                if s.iter().any(|&v| v >= vertex_count) {
                    return Err(Error::InvalidComplex(format!("vertex out of range in {s:?}")));
                }
                if s.len() > 1 {
                    for i in 0..s.len() {
                        let mut f = s.clone();
                        f.remove(i);
                        if f.len() > 1 && !present.contains(&f) {
                            return Err(Error::ClosureViolated { simplex: s.clone(), face: f });
                        }
                    }
                }
            }
        }
        Self::from_facets(vertex_count, &all)
    }

    fn assemble(mut simplices: Vec<Vec<Simplex>>) -> Self {
        while simplices.len() > 1 && simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        for list in &mut simplices {
            list.sort();
        }
        let index: Vec<HashMap<Simplex, usize>> = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut faces = vec![Vec::new()];
        faces[0] = vec![Vec::new(); simplices[0].len()];
        for k in 1..simplices.len() {
            let f = simplices[k]
                .iter()
                .map(|s| {
                    (0..=k)
                        .map(|i| {
                            let mut t = s.clone();
                            t.remove(i);
                            (index[k - 1][&t], if i % 2 == 0 { 1 } else { -1 })
                        })
                        .collect()
                })
                .collect();
            faces.push(f);
        }
        let n = simplices.len();
        SimplicialComplex {
            simplices,
            index,
            faces,
            fundamental: None,
            cache: Default::default(),
            boundaries: (0..n + 2).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn vertex_count(&self) -> usize {
        self.simplices[0].len()
    }

    /// Number of `k`-simplices (zero outside `0..=n`).
    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn total_simplices(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, k: usize, i: usize) -> &Simplex {
        &self.simplices[k][i]
    }

    /// Index of a sorted vertex tuple.
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let k = s.len().checked_sub(1)?;
        self.index.get(k)?.get(s).copied()
    }

    pub fn faces(&self, k: usize, i: usize) -> &[(usize, i64)] {
        &self.faces[k][i]
    }

    /// `∂_k : C_k → C_{k-1}`, for `0 ≤ k ≤ n + 1` (zero maps at the ends).
    pub fn boundary(&self, k: usize) -> &SparseMatrix<i64> {
        self.boundaries[k].get_or_init(|| {
            if k == 0 || k > self.dimension() {
                return SparseMatrix::zeros(if k == 0 { 0 } else { self.count(k - 1) }, self.count(k));
            }
            let trip = self.faces[k]
                .iter()
                .enumerate()
                .flat_map(|(j, fs)| fs.iter().map(move |&(i, s)| (i, j, s)));
            SparseMatrix::from_triplets(self.count(k - 1), self.count(k), trip)
        })
    }

    /// The boundary matrix as an integer matrix; `1 ≤ k ≤ n`.
    pub fn boundary_matrix(&self, k: usize) -> Result<SparseMatrix<BigInt>> {
        if k < 1 || k > self.dimension() {
            return Err(Error::DegreeOutOfRange { degree: k as i64, min: 1, max: self.dimension() as i64 });
        }
        Ok(self.boundary(k).map(|&x| BigInt::from(x)))
    }

    /// `∂ c` for a `k`-chain.
    pub fn apply_boundary<T: crate::scalar::Ring>(&self, k: usize, c: &[T]) -> Vec<T> {
        assert_eq!(c.len(), self.count(k), "chain length does not match simplex count");
        let mut out = vec![T::zero(); if k == 0 { 0 } else { self.count(k - 1) }];
        if k == 0 {
            return out;
        }
        for (j, fs) in self.faces[k].iter().enumerate() {
            if c[j].is_zero() {
                continue;
            }
            for &(i, s) in fs {
                out[i] = out[i].clone() + T::from_sign(s) * c[j].clone();
            }
        }
        out
    }

    /// `δ u` for a `k`-cochain, giving a `(k+1)`-cochain.
    pub fn apply_coboundary<T: crate::scalar::Ring>(&self, k: usize, u: &[T]) -> Vec<T> {
        assert_eq!(u.len(), self.count(k), "cochain length does not match simplex count");
        let m = self.count(k + 1);
        let mut out = vec![T::zero(); m];
        if m == 0 {
            return out;
        }
        for (j, fs) in self.faces[k + 1].iter().enumerate() {
            let mut acc = T::zero();
            for &(i, s) in fs {
                if !u[i].is_zero() {
                    acc = acc + T::from_sign(s) * u[i].clone();
                }
            }
            out[j] = acc;
        }
        out
    }

    pub fn fundamental_cycle(&self) -> Option<&[i64]> {
        self.fundamental.as_deref()
    }

    pub fn is_oriented(&self) -> bool {
        self.fundamental.is_some()
    }

    /// Sets the fundamental cycle after checking it is a ±1 cycle covering
    /// every top simplex.
    pub fn set_fundamental_cycle(&mut self, coeffs: Vec<i64>) -> Result<()> {
        let n = self.dimension();
        if coeffs.len() != self.count(n) || coeffs.iter().any(|c| c.abs() != 1) {
            return Err(Error::NotACycleFundamental);
        }
        if self.apply_boundary(n, &coeffs).iter().any(|&x| x != 0) {
            return Err(Error::NotACycleFundamental);
        }
        self.fundamental = Some(coeffs);
        Ok(())
    }

    pub fn with_fundamental_cycle(mut self, coeffs: Vec<i64>) -> Result<Self> {
        self.set_fundamental_cycle(coeffs)?;
        Ok(self)
    }

    /// Finds a fundamental cycle by propagating orientations across
    /// codimension-one faces. Returns `None` unless the complex is a closed
    /// orientable pseudomanifold.
    pub fn find_orientation(&self) -> Option<Vec<i64>> {
        let n = self.dimension();
        if n == 0 {
            return (self.count(0) == 1).then(|| vec![1]);
        }
        let top = self.count(n);
        let mut cofaces: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.count(n - 1)];
        for (j, fs) in self.faces[n].iter().enumerate() {
            for &(i, s) in fs {
                cofaces[i].push((j, s));
            }
        }
        if cofaces.iter().any(|c| c.len() != 2) {
            return None;
        }
        let mut sign = vec![0i64; top];
        for start in 0..top {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(j) = queue.pop_front() {
                for &(i, s) in &self.faces[n][j] {
                    for &(other, t) in &cofaces[i] {
                        if other == j {
                            continue;
                        }
                        let want = -sign[j] * s * t;
                        if sign[other] == 0 {
                            sign[other] = want;
                            queue.push_back(other);
                        } else if sign[other] != want {
                            return None;
                        }
                    }
                }
            }
        }
        Some(sign)
    }

    /// Attaches the orientation found by [`find_orientation`](Self::find_orientation), if any.
    pub fn oriented(mut self) -> Self {
        if self.fundamental.is_none() {
            self.fundamental = self.find_orientation();
        }
        self
    }

    /// Connected components of the 1-skeleton, as a component id per vertex.
    pub fn components(&self) -> Vec<usize> {
        let nv = self.vertex_count();
        let mut comp = vec![usize::MAX; nv];
        let adj = self.adjacency();
        let mut next = 0;
        for s in 0..nv {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Neighbours of each vertex together with the connecting edge index.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (e, s) in self.simplices(1).iter().enumerate() {
            adj[s[0]].push((s[1], e));
            adj[s[1]].push((s[0], e));
        }
        adj
    }

    /// Shortest edge path from `p` to `q` as an integral 1-chain with
    /// `∂ = q - p`.
    pub fn path_chain(&self, p: usize, q: usize) -> Result<Vec<i64>> {
        let adj = self.adjacency();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        seen[p] = true;
        let mut queue = VecDeque::from([p]);
        while let Some(v) = queue.pop_front() {
            if v == q {
                break;
            }
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        if !seen[q] {
            return Err(Error::Disconnected);
        }
        let mut chain = vec![0i64; self.count(1)];
        let mut v = q;
        while v != p {
            let (u, e) = prev[v].unwrap();
            chain[e] += if self.simplex(1, e)[0] == u { 1 } else { -1 };
            v = u;
        }
        Ok(chain)
    }

    /// The 1-chain walking the vertices in order, each step along an edge.
    pub fn vertex_path(&self, vertices: &[usize]) -> Result<Vec<i64>> {
        let mut chain = vec![0i64; self.count(1)];
        for w in vertices.windows(2) {
            let (lo, hi, sign) = if w[0] < w[1] { (w[0], w[1], 1) } else { (w[1], w[0], -1) };
            let e = self
                .index_of(&[lo, hi])
                .ok_or_else(|| Error::InvalidComplex(format!("no edge between {} and {}", w[0], w[1])))?;
            chain[e] += sign;
        }
        Ok(chain)
    }

    /// Euler characteristic from the f-vector.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }

    pub fn into_arc(self) -> Arc<Self> {
        Arc::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_counts() {
        let k = SimplicialComplex::from_facets(4, &[vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert_eq!(k.f_vector(), vec![4, 4, 1]);
        assert_eq!(k.index_of(&[1, 2]), Some(2));
        assert_eq!(k.euler_characteristic(), 1);
    }

    #[test]
    fn explicit_lists_detect_missing_faces() {
        let tri = vec![vec![vec![0], vec![1], vec![2]], vec![vec![0, 1], vec![1, 2]], vec![vec![0, 1, 2]]];
        assert!(matches!(
            SimplicialComplex::from_simplices(3, &tri, false),
            Err(Error::ClosureViolated { .. })
        ));
        assert_eq!(SimplicialComplex::from_simplices(3, &tri, true).unwrap().count(1), 3);
        let dup = vec![vec![vec![0], vec![0]]];
        assert!(matches!(SimplicialComplex::from_simplices(1, &dup, false), Err(Error::DuplicateSimplex(_))));
    }

    #[test]
    fn circle_boundary_columns() {
        let c = circle(3);
        let d = c.boundary(1).to_dense();
        // columns [01], [02], [12]
        assert_eq!(d.column(0), vec![-1, 1, 0]);
        assert_eq!(d.column(1), vec![-1, 0, 1]);
        assert_eq!(d.column(2), vec![0, -1, 1]);
    }

    #[test]
    fn tetrahedron_boundary_squares_to_zero() {
        let s = sphere(2);
        assert!(s.boundary(1).mul(s.boundary(2)).is_zero());
        assert_eq!(s.fundamental_cycle().map(<[i64]>::len), Some(4));
    }

    #[test]
    fn orientation_fails_on_projective_plane() {
        assert!(rp2().find_orientation().is_none());
        assert!(!rp2().is_oriented());
    }

    #[test]
    fn path_chain_has_expected_boundary() {
        let t = torus_grid(3);
        let c = t.path_chain(0, 5).unwrap();
        let b = t.apply_boundary(1, &c);
        let mut want = vec![0i64; 9];
        want[0] = -1;
        want[5] = 1;
        assert_eq!(b, want);
    }
}
