use std::sync::Arc;

use super::{Chain, Cochain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::scalar::Ring;

/// Degree-wise linear maps on chains between two complexes, with an optional
/// map in the reverse direction. Cochain maps are the transposes.
#[derive(Clone, Debug)]
pub struct ChainTransfer {
    pub source: Arc<SimplicialComplex>,
    pub target: Arc<SimplicialComplex>,
    /// `forward[k]`: `C_k(source) → C_k(target)`
    pub forward: Vec<SparseMatrix<i64>>,
    /// `backward[k]`: `C_k(target) → C_k(source)`
    pub backward: Option<Vec<SparseMatrix<i64>>>,
}

fn act<T: Ring>(m: &SparseMatrix<i64>, x: &[T]) -> Vec<T> {
    assert_eq!(m.cols(), x.len(), "length mismatch in chain map");
    (0..m.rows())
        .map(|i| {
            let mut acc = T::zero();
            for (j, v) in m.row(i) {
                if !x[*j].is_zero() {
                    acc = acc + T::from_sign(*v) * x[*j].clone();
                }
            }
            acc
        })
        .collect()
}

fn act_t<T: Ring>(m: &SparseMatrix<i64>, x: &[T]) -> Vec<T> {
    assert_eq!(m.rows(), x.len(), "length mismatch in cochain map");
    let mut out = vec![T::zero(); m.cols()];
    for i in 0..m.rows() {
        if x[i].is_zero() {
            continue;
        }
        for (j, v) in m.row(i) {
            out[*j] = out[*j].clone() + T::from_sign(*v) * x[i].clone();
        }
    }
    out
}

impl ChainTransfer {
    pub fn push_chain<T: Ring>(&self, c: &Chain<T>) -> Chain<T> {
        Chain::new(c.degree, act(&self.forward[c.degree], &c.values))
    }

    pub fn pull_chain<T: Ring>(&self, c: &Chain<T>) -> Option<Chain<T>> {
        let back = self.backward.as_ref()?;
        Some(Chain::new(c.degree, act(&back[c.degree], &c.values)))
    }

    /// Cochain on the target to cochain on the source (`f^*`).
    pub fn pull_cochain<T: Ring>(&self, u: &Cochain<T>) -> Cochain<T> {
        Cochain::new(u.degree, act_t(&self.forward[u.degree], &u.values))
    }

    /// Cochain on the source to cochain on the target, via the reverse map.
    pub fn push_cochain<T: Ring>(&self, u: &Cochain<T>) -> Option<Cochain<T>> {
        let back = self.backward.as_ref()?;
        Some(Cochain::new(u.degree, act_t(&back[u.degree], &u.values)))
    }

    /// Checks `∂ f = f ∂` on every basis chain, in both directions.
    pub fn commutes_with_boundary(&self) -> bool {
        let check = |maps: &[SparseMatrix<i64>], s: &SimplicialComplex, t: &SimplicialComplex| {
            (1..maps.len()).all(|k| {
                let lhs = t.boundary(k).mul(&maps[k]);
                let rhs = maps[k - 1].mul(s.boundary(k));
                lhs == rhs
            })
        };
        check(&self.forward, &self.source, &self.target)
            && self.backward.as_ref().map_or(true, |b| check(b, &self.target, &self.source))
    }
}

/// A vertex map that sends simplices to simplices.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: Arc<SimplicialComplex>,
    pub target: Arc<SimplicialComplex>,
    pub vertex_map: Vec<usize>,
}

/// Image of an ordered simplex under a vertex map: sorted target simplex
/// and permutation sign, or `None` if degenerate.
pub(crate) fn image(s: &[usize], f: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut img: Vec<usize> = s.iter().map(|&v| f[v]).collect();
    // insertion sort counting transpositions
    let mut sign = 1;
    for i in 1..img.len() {
        let mut j = i;
        while j > 0 && img[j - 1] > img[j] {
            img.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if img.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((img, sign))
    }
}

/// Chain map induced by a vertex map, degrees `0..=n` of `source`.
pub(crate) fn induced_chain_maps(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    f: &[usize],
) -> Result<Vec<SparseMatrix<i64>>> {
    let mut maps = Vec::new();
    for k in 0..=source.dimension() {
        let mut trip = Vec::new();
        for (j, s) in source.simplices(k).iter().enumerate() {
            let full: Vec<usize> = s.iter().map(|&v| f[v]).collect();
            let mut set = full.clone();
            set.sort_unstable();
            set.dedup();
            if target.index_of(&set).is_none() {
                return Err(Error::NotSimplicial(format!("image of {s:?} is not a simplex")));
            }
            if let Some((img, sign)) = image(s, f) {
                trip.push((target.index_of(&img).unwrap(), j, sign));
            }
        }
        maps.push(SparseMatrix::from_triplets(target.count(k), source.count(k), trip));
    }
    Ok(maps)
}

impl SimplicialMap {
    pub fn new(source: Arc<SimplicialComplex>, target: Arc<SimplicialComplex>, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() || vertex_map.iter().any(|&v| v >= target.vertex_count()) {
            return Err(Error::NotSimplicial("vertex map has the wrong shape".into()));
        }
        induced_chain_maps(&source, &target, &vertex_map)?;
        Ok(SimplicialMap { source, target, vertex_map })
    }

    pub fn identity(k: Arc<SimplicialComplex>) -> Self {
        let n = k.vertex_count();
        SimplicialMap { source: k.clone(), target: k, vertex_map: (0..n).collect() }
    }

    /// `self ∘ g` (first `g`, then `self`).
    pub fn after(&self, g: &SimplicialMap) -> Result<SimplicialMap> {
        if !Arc::ptr_eq(&g.target, &self.source) && *g.target != *self.source {
            return Err(Error::MismatchedComplexes);
        }
        let vm = g.vertex_map.iter().map(|&v| self.vertex_map[v]).collect();
        SimplicialMap::new(g.source.clone(), self.target.clone(), vm)
    }

    pub fn transfer(&self) -> ChainTransfer {
        let forward = induced_chain_maps(&self.source, &self.target, &self.vertex_map).unwrap();
        ChainTransfer { source: self.source.clone(), target: self.target.clone(), forward, backward: None }
    }

    pub fn pull_cochain<T: Ring>(&self, u: &Cochain<T>) -> Cochain<T> {
        if u.degree > self.source.dimension() {
            return Cochain::new(u.degree, Vec::new());
        }
        self.transfer().pull_cochain(u)
    }

    pub fn push_chain<T: Ring>(&self, c: &Chain<T>) -> Chain<T> {
        self.transfer().push_chain(c)
    }
}
