//! Standard triangulations.

use std::collections::BTreeSet;

use super::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: usize = 200_000;

fn closed(vertices: usize, facets: &[Simplex]) -> SimplicialComplex {
    SimplicialComplex::from_facets(vertices, facets).expect("builder data is valid").oriented()
}

pub fn point() -> SimplicialComplex {
    closed(1, &[vec![0]])
}

/// The full simplex `Δⁿ` (not closed, so unoriented).
pub fn simplex(n: usize) -> SimplicialComplex {
    SimplicialComplex::from_facets(n + 1, &[(0..=n).collect()]).unwrap()
}

/// `∂Δⁿ⁺¹`
pub fn sphere(n: usize) -> SimplicialComplex {
    let facets: Vec<Simplex> = (0..=n + 1).map(|skip| (0..=n + 1).filter(|&v| v != skip).collect()).collect();
    closed(n + 2, &facets)
}

/// Polygon with `m ≥ 3` vertices.
pub fn circle(m: usize) -> SimplicialComplex {
    assert!(m >= 3, "a simplicial circle needs at least 3 vertices");
    let facets: Vec<Simplex> = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
    closed(m, &facets)
}

/// `m × m` grid on the torus; vertex `(x, y)` is `x + m·y` and each square is
/// split along its `(x, y)–(x+1, y+1)` diagonal.
pub fn torus_grid(m: usize) -> SimplicialComplex {
    assert!(m >= 3, "the grid torus needs m ≥ 3");
    let v = |x: usize, y: usize| (x % m) + m * (y % m);
    let mut facets = Vec::new();
    for y in 0..m {
        for x in 0..m {
            facets.push(vec![v(x, y), v(x + 1, y), v(x + 1, y + 1)]);
            facets.push(vec![v(x, y), v(x, y + 1), v(x + 1, y + 1)]);
        }
    }
    closed(m * m, &facets)
}

/// The horizontal and vertical loops through `(0, 0)` of [`torus_grid`].
pub fn torus_grid_loops(k: &SimplicialComplex, m: usize) -> Result<[Vec<i64>; 2]> {
    let x: Vec<usize> = (0..=m).map(|i| i % m).collect();
    let y: Vec<usize> = (0..=m).map(|i| m * (i % m)).collect();
    Ok([k.vertex_path(&x)?, k.vertex_path(&y)?])
}

fn mobius_torus_facets() -> Vec<Simplex> {
    (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect()
}

/// Orientable surface of genus `g ≥ 0`: the 7-vertex torus for `g = 1` and
/// iterated connected sums of it for larger `g`.
pub fn torus_surface(g: usize) -> SimplicialComplex {
    if g == 0 {
        return sphere(2);
    }
    let base = mobius_torus_facets();
    let mut facets: Vec<Simplex> = base.clone();
    let mut nv = 7;
    for _ in 1..g {
        // remove the last facet of the running surface and a facet of a
        // fresh copy, then glue along the two boundary triangles
        let cut = facets.pop().unwrap();
        let mut other = base.clone();
        let removed = other.remove(0);
        let mut relabel = [usize::MAX; 7];
        for (a, b) in removed.iter().zip(&cut) {
            relabel[*a] = *b;
        }
        for r in relabel.iter_mut() {
            if *r == usize::MAX {
                *r = nv;
                nv += 1;
            }
        }
        facets.extend(other.into_iter().map(|f| f.into_iter().map(|v| relabel[v]).collect()));
    }
    closed(nv, &facets)
}

/// Six-vertex real projective plane.
pub fn rp2() -> SimplicialComplex {
    let f = [
        [1, 2, 3],
        [1, 3, 4],
        [1, 4, 5],
        [1, 5, 6],
        [1, 2, 6],
        [2, 3, 5],
        [3, 4, 6],
        [2, 4, 5],
        [3, 5, 6],
        [2, 4, 6],
    ];
    let facets: Vec<Simplex> = f.iter().map(|t| t.iter().map(|v| v - 1).collect()).collect();
    closed(6, &facets)
}

/// Nine-vertex complex projective plane.
pub fn cp2() -> SimplicialComplex {
    const F: [[usize; 5]; 36] = [
        [0, 1, 2, 3, 4],
        [0, 1, 2, 3, 5],
        [0, 1, 2, 4, 5],
        [0, 1, 3, 4, 6],
        [0, 1, 3, 5, 7],
        [0, 1, 3, 6, 7],
        [0, 1, 4, 5, 6],
        [0, 1, 5, 6, 8],
        [0, 1, 5, 7, 8],
        [0, 1, 6, 7, 8],
        [0, 2, 3, 4, 8],
        [0, 2, 3, 5, 8],
        [0, 2, 4, 5, 6],
        [0, 2, 4, 6, 7],
        [0, 2, 4, 7, 8],
        [0, 2, 5, 6, 8],
        [0, 2, 6, 7, 8],
        [0, 3, 4, 6, 7],
        [0, 3, 4, 7, 8],
        [0, 3, 5, 7, 8],
        [1, 2, 3, 4, 8],
        [1, 2, 3, 5, 7],
        [1, 2, 3, 6, 7],
        [1, 2, 3, 6, 8],
        [1, 2, 4, 5, 7],
        [1, 2, 4, 7, 8],
        [1, 2, 6, 7, 8],
        [1, 3, 4, 6, 8],
        [1, 4, 5, 6, 8],
        [1, 4, 5, 7, 8],
        [2, 3, 5, 6, 7],
        [2, 3, 5, 6, 8],
        [2, 4, 5, 6, 7],
        [3, 4, 5, 6, 7],
        [3, 4, 5, 6, 8],
        [3, 4, 5, 7, 8],
    ];
    let facets: Vec<Simplex> = F.iter().map(|f| f.to_vec()).collect();
    closed(9, &facets)
}

/// Lens space `L(p, q)`: the barycentric subdivision of the join of two
/// `2p`-gons divided by the free action rotating the first polygon by two
/// steps and the second by `2q` steps.
pub fn lens(p: usize, q: usize) -> Result<SimplicialComplex> {
    if p < 2 || q == 0 || num_integer::gcd(p, q) != 1 {
        return Err(Error::InvalidComplex(format!("lens space needs p ≥ 2 and gcd(p, q) = 1, got ({p}, {q})")));
    }
    let m = 2 * p;
    // join vertices: a_i = i, b_j = m + j
    let mut join = Vec::new();
    for i in 0..m {
        for j in 0..m {
            join.push(vec![i, (i + 1) % m, m + j, m + (j + 1) % m]);
        }
    }
    let j = SimplicialComplex::from_facets(2 * m, &join)?;
    let act = |v: usize| if v < m { (v + 2) % m } else { m + (v - m + 2 * q) % m };
    // barycentric vertices are simplices of the join, numbered in (dim, lex) order
    let mut offset = vec![0];
    for k in 0..=j.dimension() {
        offset.push(offset[k] + j.count(k));
    }
    let id = |s: &Simplex| offset[s.len() - 1] + j.index_of(s).unwrap();
    let total = offset[j.dimension() + 1];
    let mut orbit = vec![usize::MAX; total];
    let mut reps = 0;
    for k in 0..=j.dimension() {
        for s in j.simplices(k) {
            let me = id(s);
            if orbit[me] != usize::MAX {
                continue;
            }
            let mut t = s.clone();
            for _ in 0..p {
                orbit[id(&t)] = reps;
                t = t.iter().map(|&v| act(v)).collect();
                t.sort_unstable();
            }
            reps += 1;
        }
    }
    let mut facets = BTreeSet::new();
    for top in j.simplices(3) {
        for flag in maximal_flags(top) {
            let mut f: Simplex = flag.iter().map(|s| orbit[id(s)]).collect();
            f.sort_unstable();
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex("quotient is not simplicial".into()));
            }
            facets.insert(f);
        }
    }
    let facets: Vec<Simplex> = facets.into_iter().collect();
    Ok(closed(reps, &facets))
}

pub fn rp3() -> SimplicialComplex {
    lens(2, 1).expect("L(2,1) is valid")
}

/// Chains of faces `v_{π0} ⊂ v_{π0}v_{π1} ⊂ … ⊂ top` for all orderings π.
pub(crate) fn maximal_flags(top: &[usize]) -> Vec<Vec<Simplex>> {
    let mut out = Vec::new();
    let mut order: Vec<usize> = Vec::new();
    fn rec(top: &[usize], order: &mut Vec<usize>, out: &mut Vec<Vec<Simplex>>) {
        if order.len() == top.len() {
            let mut flag = Vec::new();
            for l in 1..=order.len() {
                let mut s: Simplex = order[..l].to_vec();
                s.sort_unstable();
                flag.push(s);
            }
            out.push(flag);
            return;
        }
        for &v in top {
            if !order.contains(&v) {
                order.push(v);
                rec(top, order, out);
                order.pop();
            }
        }
    }
    rec(top, &mut order, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of `k`-simplices of the staircase triangulation of `Δⁱ × Δʲ`
/// whose interiors lie in the interior of the product cell.
pub(crate) fn staircase_interior(i: usize, j: usize, k: usize) -> usize {
    if k < i.max(j) || k > i + j {
        return 0;
    }
    // choose which of the k steps move in the first factor only, the second
    // only, or both
    let both = i + j - k;
    binomial(k, k - j) * binomial(j, both)
}

/// f-vector of the staircase product.
pub fn product_size(fa: &[usize], fb: &[usize]) -> Vec<usize> {
    let n = fa.len() + fb.len() - 2;
    let mut out = vec![0usize; n + 1];
    for (i, &a) in fa.iter().enumerate() {
        for (j, &b) in fb.iter().enumerate() {
            for (k, o) in out.iter_mut().enumerate() {
                *o = o.saturating_add(a.saturating_mul(b).saturating_mul(staircase_interior(i, j, k)));
            }
        }
    }
    out
}

/// Staircase triangulation of `|A| × |B|`; vertex `(a, b)` is `a·|B| + b`.
pub fn product(a: &SimplicialComplex, b: &SimplicialComplex, budget: usize) -> Result<SimplicialComplex> {
    let needed: usize = product_size(&a.f_vector(), &b.f_vector()).iter().sum();
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let nb = b.vertex_count();
    let top = |k: &SimplicialComplex| -> Vec<Simplex> {
        // maximal simplices
        let mut out = Vec::new();
        for d in 0..=k.dimension() {
            for s in k.simplices(d) {
                let is_face = d < k.dimension()
                    && k.simplices(d + 1).iter().any(|t| s.iter().all(|v| t.contains(v)));
                if !is_face {
                    out.push(s.clone());
                }
            }
        }
        out
    };
    let mut facets = Vec::new();
    for s in top(a) {
        for t in top(b) {
            let (i, j) = (s.len() - 1, t.len() - 1);
            // monotone lattice paths from (0,0) to (i,j)
            let steps = i + j;
            for mask in 0u64..(1u64 << steps) {
                if mask.count_ones() as usize != i {
                    continue;
                }
                let (mut x, mut y) = (0, 0);
                let mut f = vec![s[0] * nb + t[0]];
                for st in 0..steps {
                    if mask >> st & 1 == 1 {
                        x += 1;
                    } else {
                        y += 1;
                    }
                    f.push(s[x] * nb + t[y]);
                }
                facets.push(f);
            }
        }
    }
    let orient = a.is_oriented() && b.is_oriented();
    let k = SimplicialComplex::from_facets(a.vertex_count() * nb, &facets)?;
    Ok(if orient { k.oriented() } else { k })
}

/// Builds a named space. Names: `point`, `simplexN`, `circleM`, `sphereN`,
/// `torus`, `genusG`, `gridM`, `rp2`, `rp3`, `cp2`, `lensP_Q`, and
/// `A*B` for products.
pub fn build_standard(name: &str, budget: usize) -> Result<SimplicialComplex> {
    let name = name.trim();
    if let Some((l, r)) = name.split_once('*') {
        let a = build_standard(l, budget)?;
        let b = build_standard(r, budget)?;
        return product(&a, &b, budget);
    }
    let num = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix).and_then(|s| s.parse().ok()) };
    let unknown = || Error::UnknownSpace(name.to_string());
    Ok(match name {
        "point" => point(),
        "torus" => torus_surface(1),
        "rp2" => rp2(),
        "rp3" => rp3(),
        "cp2" => cp2(),
        "circle" => circle(3),
        _ => {
            if let Some(n) = num("sphere") {
                sphere(n)
            } else if let Some(n) = num("simplex") {
                simplex(n)
            } else if let Some(m) = num("circle").filter(|&m| m >= 3) {
                circle(m)
            } else if let Some(g) = num("genus") {
                torus_surface(g)
            } else if let Some(m) = num("grid").filter(|&m| m >= 3) {
                torus_grid(m)
            } else if let Some(rest) = name.strip_prefix("lens") {
                let (p, q) = rest.split_once('_').ok_or_else(unknown)?;
                lens(p.parse().map_err(|_| unknown())?, q.parse().map_err(|_| unknown())?)?
            } else {
                return Err(unknown());
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_vectors() {
        assert_eq!(sphere(2).f_vector(), vec![4, 6, 4]);
        assert_eq!(torus_surface(1).f_vector(), vec![7, 21, 14]);
        assert_eq!(torus_surface(2).f_vector(), vec![11, 39, 26]);
        assert_eq!(torus_grid(3).f_vector(), vec![9, 27, 18]);
        assert_eq!(rp2().f_vector(), vec![6, 15, 10]);
        assert_eq!(cp2().f_vector(), vec![9, 36, 84, 90, 36]);
        assert_eq!(rp3().f_vector(), vec![40, 232, 384, 192]);
    }

    #[test]
    fn orientability() {
        for k in [sphere(1), sphere(3), torus_surface(2), torus_grid(4), cp2(), rp3(), point()] {
            assert!(k.is_oriented(), "{k:?}");
        }
        assert!(!rp2().is_oriented());
        assert!(!simplex(2).is_oriented());
    }

    #[test]
    fn product_counts_match_formula() {
        let c = circle(3);
        let t = product(&c, &c, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.f_vector(), product_size(&c.f_vector(), &c.f_vector()));
        assert_eq!(t.f_vector(), vec![9, 27, 18]);
        assert!(t.is_oriented());
        let s = product(&simplex(2), &simplex(1), DEFAULT_BUDGET).unwrap();
        assert_eq!(s.count(3), 3);
        assert_eq!(s.f_vector(), product_size(&[3, 3, 1], &[2, 1]));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(product(&cp2(), &cp2(), DEFAULT_BUDGET), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn names() {
        assert_eq!(build_standard("sphere2", DEFAULT_BUDGET).unwrap().count(0), 4);
        assert_eq!(build_standard("circle*circle", DEFAULT_BUDGET).unwrap().count(2), 18);
        assert!(matches!(build_standard("klein", DEFAULT_BUDGET), Err(Error::UnknownSpace(_))));
        assert_eq!(build_standard("lens3_1", DEFAULT_BUDGET).unwrap().dimension(), 3);
    }
}
