use std::sync::Arc;

use super::builders::maximal_flags;
use super::maps::induced_chain_maps;
use super::{ChainTransfer, Simplex, SimplicialComplex};
use crate::linalg::SparseMatrix;

/// Barycentric subdivision.
///
/// Vertices of `K′` are the simplices of `K` numbered in (dimension, lex)
/// order. The forward chain map is `sd(σ) = (-1)^k sd(∂σ) * b_σ` (cone with
/// the barycenter appended last); the backward map is the simplicial map
/// sending `b_σ` to the first vertex of `σ`, and `π ∘ sd = id`.
pub fn barycentric_subdivide(k: &Arc<SimplicialComplex>) -> (Arc<SimplicialComplex>, ChainTransfer) {
    let n = k.dimension();
    let mut offset = vec![0];
    for d in 0..=n {
        offset.push(offset[d] + k.count(d));
    }
    let id = |s: &[usize]| offset[s.len() - 1] + k.index_of(s).unwrap();
    let mut facets: Vec<Simplex> = Vec::new();
    for d in 0..=n {
        for s in k.simplices(d) {
            let maximal = d == n || !k.simplices(d + 1).iter().any(|t| s.iter().all(|v| t.contains(v)));
            if maximal {
                for flag in maximal_flags(s) {
                    facets.push(flag.iter().map(|f| id(f)).collect());
                }
            }
        }
    }
    let mut sub = SimplicialComplex::from_facets(offset[n + 1], &facets).expect("subdivision is a complex");

    // forward map, built degree by degree as explicit chains in K′
    let mut forward: Vec<SparseMatrix<i64>> = Vec::new();
    let mut images: Vec<Vec<Vec<(usize, i64)>>> = Vec::new();
    for d in 0..=n {
        let mut img_d = Vec::new();
        for (j, s) in k.simplices(d).iter().enumerate() {
            let b = id(s);
            if d == 0 {
                img_d.push(vec![(sub.index_of(&[b]).unwrap(), 1)]);
                continue;
            }
            let sign = if d % 2 == 0 { 1 } else { -1 };
            let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
            for &(f, fs) in k.faces(d, j) {
                for &(c, cs) in &images[d - 1][f] {
                    let mut cell = sub.simplex(d - 1, c).clone();
                    cell.push(b);
                    let idx = sub.index_of(&cell).unwrap();
                    *acc.entry(idx).or_default() += sign * fs * cs;
                }
            }
            img_d.push(acc.into_iter().filter(|e| e.1 != 0).collect());
        }
        let trip = img_d.iter().enumerate().flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)));
        forward.push(SparseMatrix::from_triplets(sub.count(d), k.count(d), trip));
        images.push(img_d);
    }

    if let Some(f) = k.fundamental_cycle() {
        let z = forward[n].mul_vec(f);
        let _ = sub.set_fundamental_cycle(z);
    }
    let sub = Arc::new(sub);

    let mut vertex_map = vec![0; offset[n + 1]];
    for d in 0..=n {
        for s in k.simplices(d) {
            vertex_map[id(s)] = s[0];
        }
    }
    let backward = induced_chain_maps(&sub, k, &vertex_map).expect("first-vertex map is simplicial");
    let t = ChainTransfer { source: k.clone(), target: sub.clone(), forward, backward: Some(backward) };
    (sub, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{circle, sphere, Chain};

    #[test]
    fn circle_becomes_hexagon() {
        let c = Arc::new(circle(3));
        let (s, t) = barycentric_subdivide(&c);
        assert_eq!(s.f_vector(), vec![6, 6]);
        assert!(t.commutes_with_boundary());
        let z = Chain::<i64>::from_i64(1, c.fundamental_cycle().unwrap());
        let img = t.push_chain(&z);
        assert_eq!(img.values, s.fundamental_cycle().unwrap().to_vec());
        assert_eq!(t.pull_chain(&img).unwrap(), z);
    }

    #[test]
    fn sphere_subdivision() {
        let s2 = Arc::new(sphere(2));
        let (s, t) = barycentric_subdivide(&s2);
        assert_eq!(s.count(2), 24);
        assert!(s.is_oriented());
        assert!(t.commutes_with_boundary());
        for d in 0..=2 {
            for j in 0..s2.count(d) {
                let e = Chain::<i64>::basis(&s2, d, j);
                assert_eq!(t.pull_chain(&t.push_chain(&e)).unwrap(), e);
            }
        }
    }
}
