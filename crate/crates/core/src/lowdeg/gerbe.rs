//! Gerbes with connection as degree-2 characters, in the Čech–simplicial
//! double complex of a cover by subcomplexes.
//!
//! A Čech `(p, q)`-cochain assigns a rational `q`-cochain to every ordered
//! `(p+1)`-fold overlap, antisymmetric in the patch indices. Entries are
//! stored as full-length cochains on the whole complex, read only on the
//! overlap. The total differential is `D = d + (-1)^{q+1} δ_Č`, so a gerbe
//! `A = (A₀, A₁, A₂)` has `DA = φ - R` with `R = δ_Č A₂`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::cohomology::cycle_lattice_basis;
use crate::complex::{as_simplex, Chain, Cochain, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{rank, solve, DenseMatrix};
use crate::scalar::{format_rational, frac, parse_rational, rat};

/// Membership of each simplex, by degree.
type Cells = Vec<Vec<bool>>;

/// A cover by subcomplexes and its nerve up to fourfold overlaps.
#[derive(Clone, Debug)]
pub struct Cover {
    complex: Arc<SimplicialComplex>,
    patches: Vec<Cells>,
    /// `nerve[p]`: sorted `(p+1)`-tuples of patches with nonempty overlap.
    nerve: Vec<BTreeMap<Vec<usize>, Cells>>,
}

impl PartialEq for Cover {
    fn eq(&self, other: &Self) -> bool {
        crate::spark::same_complex(&self.complex, &other.complex) && self.patches == other.patches
    }
}

fn intersect(a: &Cells, b: &Cells) -> Cells {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| *p && *q).collect()).collect()
}

fn is_empty(c: &Cells) -> bool {
    !c[0].iter().any(|&x| x)
}

fn mask(x: &[BigRational], cells: &[bool]) -> Vec<BigRational> {
    x.iter().zip(cells).map(|(v, &m)| if m { v.clone() } else { BigRational::zero() }).collect()
}

impl Cover {
    /// Closed vertex stars: patch `v` holds every `σ` with `σ ∪ {v}` a simplex.
    pub fn vertex_stars(complex: Arc<SimplicialComplex>) -> Self {
        let n = complex.dimension();
        let mut patches = Vec::with_capacity(complex.vertex_count());
        for v in 0..complex.vertex_count() {
            let mut cells: Cells = (0..=n).map(|k| vec![false; complex.count(k)]).collect();
            for k in 0..=n {
                for (i, s) in complex.simplices(k).iter().enumerate() {
                    let mut t = s.clone();
                    if !t.contains(&v) {
                        t.push(v);
                        t.sort_unstable();
                    }
                    cells[k][i] = complex.index_of(&t).is_some();
                }
            }
            patches.push(cells);
        }
        Self::build(complex, patches)
    }

    /// Patches given by generating simplices; faces are added.
    pub fn from_patches(complex: Arc<SimplicialComplex>, patches: &[Vec<Simplex>]) -> Result<Self> {
        let n = complex.dimension();
        let mut out = Vec::with_capacity(patches.len());
        for p in patches {
            let mut cells: Cells = (0..=n).map(|k| vec![false; complex.count(k)]).collect();
            for s in p {
                let mut s = s.clone();
                s.sort_unstable();
                if s.is_empty() || complex.index_of(&s).is_none() {
                    return Err(Error::InvalidCover(format!("{s:?} is not a simplex")));
                }
                for mask in 1u64..(1u64 << s.len()) {
                    let face: Simplex = s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                    cells[face.len() - 1][complex.index_of(&face).unwrap()] = true;
                }
            }
            out.push(cells);
        }
        for k in 0..=n {
            for i in 0..complex.count(k) {
                if !out.iter().any(|c| c[k][i]) {
                    return Err(Error::InvalidCover(format!("{:?} lies in no patch", complex.simplex(k, i))));
                }
            }
        }
        Ok(Self::build(complex, out))
    }

    fn build(complex: Arc<SimplicialComplex>, patches: Vec<Cells>) -> Self {
        let mut nerve: Vec<BTreeMap<Vec<usize>, Cells>> = vec![BTreeMap::new(); 4];
        for (i, c) in patches.iter().enumerate() {
            nerve[0].insert(vec![i], c.clone());
        }
        for p in 1..4 {
            let mut next = BTreeMap::new();
            for (key, cells) in &nerve[p - 1] {
                for j in key.last().unwrap() + 1..patches.len() {
                    let c = intersect(cells, &patches[j]);
                    if !is_empty(&c) {
                        let mut k = key.clone();
                        k.push(j);
                        next.insert(k, c);
                    }
                }
            }
            nerve[p] = next;
        }
        Cover { complex, patches, nerve }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn patch_count(&self) -> usize {
        self.patches.len()
    }

    /// Sorted `(p+1)`-tuples with nonempty overlap.
    pub fn nerve(&self, p: usize) -> Vec<Vec<usize>> {
        self.nerve[p].keys().cloned().collect()
    }

    fn cells(&self, key: &[usize]) -> Option<&Cells> {
        self.nerve.get(key.len() - 1).and_then(|m| m.get(key))
    }

    pub fn contains(&self, patch: usize, k: usize, cell: usize) -> bool {
        self.patches[patch][k][cell]
    }

    /// Overlaps up to threefold whose rational cohomology is not that of a
    /// finite set of points, with their positive-degree Betti numbers.
    pub fn acyclicity_defects(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::new();
        for p in 0..3 {
            for (key, cells) in &self.nerve[p] {
                let b = self.betti(cells);
                if b[1..].iter().any(|&x| x > 0) {
                    out.push((key.clone(), b));
                }
            }
        }
        out
    }

    fn betti(&self, cells: &Cells) -> Vec<usize> {
        let n = self.complex.dimension();
        let idx: Vec<Vec<usize>> = cells.iter().map(|c| (0..c.len()).filter(|&i| c[i]).collect()).collect();
        let ranks: Vec<usize> = (0..n)
            .map(|k| rank(&self.restricted_d(&idx, k), 0.0))
            .collect();
        (0..=n)
            .map(|k| {
                let r_out = if k < n { ranks[k] } else { 0 };
                let r_in = if k > 0 { ranks[k - 1] } else { 0 };
                idx[k].len() - r_out - r_in
            })
            .collect()
    }

    /// Matrix of `d : Cᵏ(U) → Cᵏ⁺¹(U)` on the cells listed in `idx`.
    fn restricted_d(&self, idx: &[Vec<usize>], k: usize) -> DenseMatrix<BigRational> {
        let pos: BTreeMap<usize, usize> = idx[k].iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut m = DenseMatrix::zeros(idx[k + 1].len(), idx[k].len());
        for (r, &t) in idx[k + 1].iter().enumerate() {
            for &(f, s) in self.complex.faces(k + 1, t) {
                if let Some(&c) = pos.get(&f) {
                    m[(r, c)] = BigRational::from_integer(s.into());
                }
            }
        }
        m
    }

    /// A `k`-cochain `b` on the overlap with `d b = x` there.
    fn primitive(&self, key: &[usize], x: &[BigRational], k: usize) -> Result<Vec<BigRational>> {
        let cells = self.cells(key).unwrap();
        let idx: Vec<Vec<usize>> = cells.iter().map(|c| (0..c.len()).filter(|&i| c[i]).collect()).collect();
        let m = self.restricted_d(&idx, k);
        let rhs: Vec<BigRational> = idx[k + 1].iter().map(|&i| x[i].clone()).collect();
        let sol = solve(&m, &rhs, 0.0)
            .ok_or_else(|| Error::InvalidCover(format!("closed {}-cochain not exact on overlap {key:?}", k + 1)))?;
        let mut out = vec![BigRational::zero(); self.complex.count(k)];
        for (&i, v) in idx[k].iter().zip(sol) {
            out[i] = v;
        }
        Ok(out)
    }

    /// Patches as lists of their simplices.
    pub fn to_json(&self) -> Value {
        let patches: Vec<Value> = self
            .patches
            .iter()
            .map(|cells| {
                let simplices: Vec<Value> = cells
                    .iter()
                    .enumerate()
                    .flat_map(|(k, c)| (0..c.len()).filter(|&i| c[i]).map(move |i| (k, i)))
                    .map(|(k, i)| json!(self.complex.simplex(k, i)))
                    .collect();
                Value::from(simplices)
            })
            .collect();
        json!({ "patches": patches })
    }

    pub fn from_json(complex: Arc<SimplicialComplex>, doc: &Value) -> Result<Self> {
        match doc {
            Value::String(s) if s == "vertex-stars" => Ok(Self::vertex_stars(complex)),
            Value::Object(_) => {
                let patches = doc
                    .get("patches")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("cover needs a \"patches\" array".into()))?
                    .iter()
                    .map(|p| {
                        p.as_array()
                            .ok_or_else(|| Error::Parse("patch must be a list of simplices".into()))?
                            .iter()
                            .map(as_simplex)
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::from_patches(complex, &patches)
            }
            _ => Err(Error::Parse("cover must be \"vertex-stars\" or {\"patches\": ...}".into())),
        }
    }
}

/// Sign of the permutation sorting `idx`, or `None` on a repeated index.
fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// A Čech `(p, q)`-cochain.
#[derive(Clone, Debug, PartialEq)]
pub struct CechCochain {
    pub p: usize,
    pub q: usize,
    pub entries: BTreeMap<Vec<usize>, Vec<BigRational>>,
}

impl CechCochain {
    pub fn zero(cover: &Cover, p: usize, q: usize) -> Self {
        let len = if q <= cover.complex.dimension() { cover.complex.count(q) } else { 0 };
        let entries = cover.nerve[p].keys().map(|k| (k.clone(), vec![BigRational::zero(); len])).collect();
        CechCochain { p, q, entries }
    }

    /// Value on an ordered index tuple, with antisymmetry.
    pub fn value(&self, idx: &[usize], cell: usize) -> BigRational {
        match sort_sign(idx) {
            Some((key, sign)) => match self.entries.get(&key) {
                Some(v) => &v[cell] * BigRational::from_integer(sign.into()),
                None => BigRational::zero(),
            },
            None => BigRational::zero(),
        }
    }

    /// Sets the entry for `idx` (sorted with sign) on `cell`.
    pub fn set(&mut self, idx: &[usize], cell: usize, v: BigRational) -> Result<()> {
        let (key, sign) = sort_sign(idx).ok_or_else(|| Error::InvalidCover("repeated patch index".into()))?;
        let e = self.entries.get_mut(&key).ok_or_else(|| Error::InvalidCover(format!("{key:?} is not in the nerve")))?;
        e[cell] = v * BigRational::from_integer(sign.into());
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().zip(&other.entries[k]).map(|(a, b)| f(a, b)).collect()))
            .collect();
        CechCochain { p: self.p, q: self.q, entries }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        let entries = self.entries.iter().map(|(k, v)| (k.clone(), v.iter().map(|x| -x).collect())).collect();
        CechCochain { p: self.p, q: self.q, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.iter().all(Zero::is_zero))
    }

    /// Masks every entry to its overlap.
    fn restricted(&self, cover: &Cover) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), mask(v, &cover.cells(k).unwrap()[self.q])))
            .collect();
        CechCochain { p: self.p, q: self.q, entries }
    }

    /// Simplicial coboundary on each overlap.
    pub fn d(&self, cover: &Cover) -> Self {
        let k = &cover.complex;
        let entries = self
            .entries
            .iter()
            .map(|(key, v)| {
                let cells = cover.cells(key).unwrap();
                let out = if self.q < k.dimension() {
                    mask(&k.apply_coboundary(self.q, &mask(v, &cells[self.q])), &cells[self.q + 1])
                } else {
                    Vec::new()
                };
                (key.clone(), out)
            })
            .collect();
        CechCochain { p: self.p, q: self.q + 1, entries }
    }

    /// Čech coboundary, restricting to the smaller overlaps. Beyond fourfold
    /// overlaps the result is empty.
    pub fn delta(&self, cover: &Cover) -> Self {
        let mut out = CechCochain { p: self.p + 1, q: self.q, entries: BTreeMap::new() };
        if self.p + 1 >= cover.nerve.len() {
            return out;
        }
        for (key, cells) in &cover.nerve[self.p + 1] {
            let mut acc = vec![BigRational::zero(); self.entries.values().next().map_or(0, Vec::len)];
            for i in 0..key.len() {
                let mut face = key.clone();
                face.remove(i);
                if let Some(v) = self.entries.get(&face) {
                    for (a, x) in acc.iter_mut().zip(v) {
                        if i % 2 == 0 {
                            *a += x;
                        } else {
                            *a -= x;
                        }
                    }
                }
            }
            out.entries.insert(key.clone(), mask(&acc, &cells[self.q]));
        }
        out
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in &self.entries {
            if v.iter().any(|x| !x.is_zero()) {
                let key = k.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
                m.insert(key, Value::from(v.iter().map(format_rational).collect::<Vec<_>>()));
            }
        }
        Value::Object(m)
    }

    fn from_json(cover: &Cover, p: usize, q: usize, doc: Option<&Value>) -> Result<Self> {
        let mut c = Self::zero(cover, p, q);
        let Some(doc) = doc else { return Ok(c) };
        let obj = doc.as_object().ok_or_else(|| Error::Parse("Čech layer must be an object".into()))?;
        for (key, vals) in obj {
            let idx = key
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad patch index list {key:?}"))))
                .collect::<Result<Vec<_>>>()?;
            if idx.len() != p + 1 {
                return Err(Error::Parse(format!("{key:?} should list {} patches", p + 1)));
            }
            let vals = vals
                .as_array()
                .ok_or_else(|| Error::Parse("layer entry must be an array".into()))?
                .iter()
                .map(|v| v.as_str().map(parse_rational).unwrap_or_else(|| Err(Error::Parse("use \"p/q\" strings".into()))))
                .collect::<Result<Vec<_>>>()?;
            if vals.len() != cover.complex.count(q) {
                return Err(Error::DimensionMismatch(format!("{key:?} has {} values, expected {}", vals.len(), cover.complex.count(q))));
            }
            for (cell, v) in vals.into_iter().enumerate() {
                c.set(&idx, cell, v)?;
            }
        }
        Ok(c.restricted(cover))
    }
}

/// Three-layer gerbe data: 2-cochains on patches, 1-cochains on double
/// overlaps, 0-cochains on triple overlaps, all in turns.
#[derive(Clone, Debug, PartialEq)]
pub struct GerbeConnection {
    cover: Arc<Cover>,
    pub patch: CechCochain,
    pub pair: CechCochain,
    pub triple: CechCochain,
}

/// Choice of a containing patch for every vertex, edge and triangle.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PatchAssignment {
    pub cells: [Vec<usize>; 3],
}

impl PatchAssignment {
    /// The first containing patch of each cell.
    pub fn first(cover: &Cover) -> Result<Self> {
        let k = &cover.complex;
        let pick = |d: usize| -> Result<Vec<usize>> {
            if d > k.dimension() {
                return Ok(Vec::new());
            }
            (0..k.count(d))
                .map(|i| {
                    (0..cover.patch_count())
                        .find(|&p| cover.contains(p, d, i))
                        .ok_or_else(|| Error::InvalidCover(format!("{:?} lies in no patch", k.simplex(d, i))))
                })
                .collect()
        };
        Ok(PatchAssignment { cells: [pick(0)?, pick(1)?, pick(2)?] })
    }

    /// A uniformly random containing patch for each cell.
    pub fn random(cover: &Cover, rng: &mut impl Rng) -> Result<Self> {
        let k = &cover.complex;
        let mut cells: [Vec<usize>; 3] = Default::default();
        for (d, slot) in cells.iter_mut().enumerate() {
            if d > k.dimension() {
                continue;
            }
            for i in 0..k.count(d) {
                let options: Vec<usize> = (0..cover.patch_count()).filter(|&p| cover.contains(p, d, i)).collect();
                if options.is_empty() {
                    return Err(Error::InvalidCover(format!("{:?} lies in no patch", k.simplex(d, i))));
                }
                slot.push(options[rng.gen_range(0..options.len())]);
            }
        }
        Ok(PatchAssignment { cells })
    }

    fn check(&self, cover: &Cover) -> Result<()> {
        for (d, slot) in self.cells.iter().enumerate() {
            if d > cover.complex.dimension() {
                continue;
            }
            if slot.len() != cover.complex.count(d) {
                return Err(Error::InvalidCover(format!("assignment has {} cells in degree {d}", slot.len())));
            }
            for (i, &p) in slot.iter().enumerate() {
                if p >= cover.patch_count() || !cover.contains(p, d, i) {
                    return Err(Error::InvalidCover(format!(
                        "{:?} is not in its assigned patch {p}",
                        cover.complex.simplex(d, i)
                    )));
                }
            }
        }
        Ok(())
    }
}

impl GerbeConnection {
    pub fn zero(cover: Arc<Cover>) -> Self {
        let patch = CechCochain::zero(&cover, 0, 2);
        let pair = CechCochain::zero(&cover, 1, 1);
        let triple = CechCochain::zero(&cover, 2, 0);
        GerbeConnection { cover, patch, pair, triple }
    }

    pub fn new(cover: Arc<Cover>, patch: CechCochain, pair: CechCochain, triple: CechCochain) -> Result<Self> {
        let shape = |c: &CechCochain, p: usize, q: usize| {
            c.p == p && c.q == q && c.entries.len() == cover.nerve[p].len() && c.entries.keys().all(|k| cover.nerve[p].contains_key(k))
        };
        if !shape(&patch, 0, 2) || !shape(&pair, 1, 1) || !shape(&triple, 2, 0) {
            return Err(Error::InvalidCover("gerbe layers do not match the nerve".into()));
        }
        let patch = patch.restricted(&cover);
        let pair = pair.restricted(&cover);
        let triple = triple.restricted(&cover);
        Ok(GerbeConnection { cover, patch, pair, triple })
    }

    /// `(F|_U, 0, 0)` for a global 2-cochain `F`.
    pub fn from_global(cover: Arc<Cover>, f: &Cochain<BigRational>) -> Result<Self> {
        f.check(&cover.complex)?;
        if f.degree != 2 {
            return Err(Error::DegreeOutOfRange { degree: f.degree as i64, min: 2, max: 2 });
        }
        let mut g = Self::zero(cover.clone());
        for (key, v) in g.patch.entries.iter_mut() {
            *v = mask(&f.values, &cover.cells(key).unwrap()[2]);
        }
        Ok(g)
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    fn same_cover(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.cover, &other.cover) || *self.cover == *other.cover {
            Ok(())
        } else {
            Err(Error::MismatchedComplexes)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_cover(other)?;
        Ok(GerbeConnection {
            cover: self.cover.clone(),
            patch: self.patch.add(&other.patch),
            pair: self.pair.add(&other.pair),
            triple: self.triple.add(&other.triple),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        GerbeConnection {
            cover: self.cover.clone(),
            patch: self.patch.neg(),
            pair: self.pair.neg(),
            triple: self.triple.neg(),
        }
    }

    /// `A + D B + S` with `D B = (d B₀, δ B₀ + d B₁, -δ B₁)` and `S` a
    /// locally constant integral triple cochain.
    pub fn gauge(&self, b0: &CechCochain, b1: &CechCochain, s: Option<&CechCochain>) -> Result<Self> {
        if (b0.p, b0.q, b1.p, b1.q) != (0, 1, 1, 0) {
            return Err(Error::InvalidCover("gauge parameters must be (0,1) and (1,0) Čech cochains".into()));
        }
        let c = &self.cover;
        let b0 = b0.restricted(c);
        let b1 = b1.restricted(c);
        let mut triple = self.triple.sub(&b1.delta(c));
        if let Some(s) = s {
            let s = s.restricted(c);
            if !s.entries.values().flatten().all(|x| x.is_integer()) || !s.d(c).is_zero() {
                return Err(Error::NonIntegralCech);
            }
            triple = triple.add(&s);
        }
        Ok(GerbeConnection {
            cover: c.clone(),
            patch: self.patch.add(&b0.d(c)),
            pair: self.pair.add(&b0.delta(c)).add(&b1.d(c)),
            triple,
        })
    }

    /// `(φ, R)` with `DA = φ - R`: `φ` the global 3-cochain `dA₀` and
    /// `R = δ_Č A₂`. The mixed components `dA₁ - δA₀` and `dA₂ + δA₁` must
    /// vanish and `R` must be integral.
    pub fn total_differential(&self) -> Result<(Cochain<BigRational>, CechCochain)> {
        let c = &self.cover;
        let k = &c.complex;
        let da0 = self.patch.d(c);
        let n3 = if k.dimension() >= 3 { k.count(3) } else { 0 };
        let mut phi: Vec<Option<BigRational>> = vec![None; n3];
        let mut owner = vec![0usize; n3];
        for (key, v) in &da0.entries {
            let cells = &c.cells(key).unwrap();
            for t in 0..n3 {
                if !cells[3][t] {
                    continue;
                }
                match &phi[t] {
                    None => {
                        phi[t] = Some(v[t].clone());
                        owner[t] = key[0];
                    }
                    Some(x) if *x != v[t] => return Err(Error::CurvatureMismatch(vec![owner[t], key[0]])),
                    _ => {}
                }
            }
        }
        let phi = Cochain::new(3, phi.into_iter().map(|x| x.unwrap_or_else(BigRational::zero)).collect());
        let mixed12 = self.pair.d(c).sub(&self.patch.delta(c));
        if let Some((key, _)) = mixed12.entries.iter().find(|(_, v)| v.iter().any(|x| !x.is_zero())) {
            return Err(Error::CurvatureMismatch(key.clone()));
        }
        let mixed21 = self.triple.d(c).add(&self.pair.delta(c));
        if let Some((key, _)) = mixed21.entries.iter().find(|(_, v)| v.iter().any(|x| !x.is_zero())) {
            return Err(Error::CurvatureMismatch(key.clone()));
        }
        let r = self.triple.delta(c);
        if !r.entries.values().flatten().all(|x| x.is_integer()) {
            return Err(Error::NonIntegralCech);
        }
        Ok((if k.dimension() >= 3 { phi } else { Cochain::new(3, Vec::new()) }, r))
    }

    /// A gauge-equivalent `(0, 0, T)` with `T` locally constant, for a flat
    /// gerbe on a cover whose patches and double overlaps are acyclic.
    pub fn flat_normal_form(&self) -> Result<CechCochain> {
        let (phi, _) = self.total_differential()?;
        if !phi.is_zero() {
            return Err(Error::NotFlat);
        }
        let c = &self.cover;
        let mut b0 = CechCochain::zero(c, 0, 1);
        for (key, v) in &self.patch.entries {
            let prim = if c.complex.dimension() >= 2 { c.primitive(key, v, 1)? } else { vec![BigRational::zero(); c.complex.count(1)] };
            b0.entries.insert(key.clone(), prim);
        }
        let a1 = self.pair.sub(&b0.delta(c));
        let mut b1 = CechCochain::zero(c, 1, 0);
        for (key, v) in &a1.entries {
            b1.entries.insert(key.clone(), c.primitive(key, v, 0)?);
        }
        let t = self.triple.add(&b1.delta(c));
        debug_assert!(t.d(c).is_zero());
        Ok(t)
    }

    /// The flat gerbe `(0, 0, T)`.
    pub fn from_triple(cover: Arc<Cover>, t: CechCochain) -> Result<Self> {
        let z = Self::zero(cover.clone());
        Self::new(cover, z.patch, z.pair, t)
    }

    /// Surface holonomy on an integral 2-cycle:
    /// `Σ_t z_t [A₀(t) + Σ_{e<t} [t:e] (A₁(e) + Σ_{v<e} [e:v] A₂(v))]` mod 1,
    /// each term read on the assigned patches of `t`, `e`, `v`.
    pub fn surface_holonomy(&self, z: &Chain<BigInt>, assignment: Option<&PatchAssignment>) -> Result<BigRational> {
        let c = &self.cover;
        let k = &c.complex;
        z.check(k)?;
        if z.degree != 2 || !z.is_cycle(k) {
            return Err(Error::NotACycle);
        }
        let owned;
        let asg = match assignment {
            Some(a) => {
                a.check(c)?;
                a
            }
            None => {
                owned = PatchAssignment::first(c)?;
                &owned
            }
        };
        let [av, ae, at] = &asg.cells;
        let mut total = BigRational::zero();
        for (t, zt) in z.values.iter().enumerate() {
            if zt.is_zero() {
                continue;
            }
            let pt = at[t];
            let mut inner = self.patch.value(&[pt], t);
            for &(e, se) in k.faces(2, t) {
                let pe = ae[e];
                let mut edge = self.pair.value(&[pt, pe], e);
                for &(v, sv) in k.faces(1, e) {
                    edge += self.triple.value(&[pt, pe, av[v]], v) * BigRational::from_integer(sv.into());
                }
                inner += edge * BigRational::from_integer(se.into());
            }
            total += inner * BigRational::from_integer(zt.clone());
        }
        Ok(frac(&total))
    }

    /// Holonomy on the fundamental class of a closed oriented surface.
    pub fn holonomy(&self) -> Result<BigRational> {
        let k = &self.cover.complex;
        if k.dimension() != 2 {
            return Err(Error::Unsupported("holonomy on the fundamental class needs a surface".into()));
        }
        let z = Chain::fundamental(k).ok_or(Error::Unoriented)?;
        self.surface_holonomy(&z, None)
    }

    /// Gauge equivalence: equal curvature, solvability of `A - A' = D B`
    /// over ℚ up to a locally constant triple cochain `T`, and integrality of
    /// `T` modulo constant Čech coboundaries, detected by its periods on a
    /// lattice basis of 2-cycles.
    pub fn gauge_equivalent(&self, other: &Self) -> Result<bool> {
        self.same_cover(other)?;
        let (phi1, _) = self.total_differential()?;
        let (phi2, _) = other.total_differential()?;
        if phi1 != phi2 {
            return Ok(false);
        }
        let diff = self.sub(other)?;
        let t = diff.flat_normal_form()?;
        let k = &self.cover.complex;
        if k.dimension() < 2 {
            return Ok(true);
        }
        let flat = Self::from_triple(self.cover.clone(), t)?;
        for z in cycle_lattice_basis(k, 2)? {
            if !flat.surface_holonomy(&z, None)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cover": self.cover.to_json(),
            "patch": self.patch.to_json(),
            "pair": self.pair.to_json(),
            "triple": self.triple.to_json(),
        })
    }

    /// Reads `{"cover": ..., "patch": {"i": [...]}, "pair": {"i,j": [...]},
    /// "triple": {"i,j,k": [...]}}`; missing entries are zero and the cover
    /// defaults to vertex stars.
    pub fn from_json(complex: Arc<SimplicialComplex>, doc: &Value) -> Result<Self> {
        let cover = match doc.get("cover") {
            Some(c) => Cover::from_json(complex, c)?,
            None => Cover::vertex_stars(complex),
        };
        let cover = Arc::new(cover);
        let patch = CechCochain::from_json(&cover, 0, 2, doc.get("patch"))?;
        let pair = CechCochain::from_json(&cover, 1, 1, doc.get("pair"))?;
        let triple = CechCochain::from_json(&cover, 2, 0, doc.get("triple"))?;
        Self::new(cover, patch, pair, triple)
    }
}

/// Random rational gauge parameters `(B₀, B₁)` with small denominators.
pub fn random_gauge(cover: &Cover, rng: &mut impl Rng) -> (CechCochain, CechCochain) {
    let mut fill = |c: &mut CechCochain| {
        for v in c.entries.values_mut() {
            for x in v.iter_mut() {
                *x = rat(rng.gen_range(-12..=12), rng.gen_range(1..=6));
            }
        }
    };
    let mut b0 = CechCochain::zero(cover, 0, 1);
    let mut b1 = CechCochain::zero(cover, 1, 0);
    fill(&mut b0);
    fill(&mut b1);
    (b0.restricted(cover), b1.restricted(cover))
}

/// Random locally constant integral triple cochain.
pub fn random_integral_shift(cover: &Cover, rng: &mut impl Rng) -> CechCochain {
    let mut s = CechCochain::zero(cover, 2, 0);
    for (key, v) in s.entries.iter_mut() {
        let cells = &cover.cells(key).unwrap()[0];
        let comps = component_labels(&cover.complex, cells);
        let shifts: Vec<i64> = (0..=comps.iter().flatten().max().copied().unwrap_or(0)).map(|_| rng.gen_range(-3..=3)).collect();
        for (x, l) in v.iter_mut().zip(&comps) {
            if let Some(l) = l {
                *x = BigRational::from_integer(shifts[*l].into());
            }
        }
    }
    s
}

fn component_labels(k: &SimplicialComplex, vertices: &[bool]) -> Vec<Option<usize>> {
    let mut label: Vec<Option<usize>> = vec![None; vertices.len()];
    let adj = k.adjacency();
    let mut next = 0;
    for s in 0..vertices.len() {
        if !vertices[s] || label[s].is_some() {
            continue;
        }
        label[s] = Some(next);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if vertices[w] && label[w].is_none() {
                    label[w] = Some(next);
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    label
}

/// The flat gerbe whose holonomy on the fundamental class of a closed
/// oriented surface is `value`: the normal form of `(value·u, 0, 0)` with `u`
/// dual to the fundamental class on one triangle.
pub fn fractional_gerbe(cover: Arc<Cover>, value: &BigRational) -> Result<GerbeConnection> {
    let k = cover.complex.clone();
    if k.dimension() != 2 {
        return Err(Error::Unsupported("fractional gerbes are built on surfaces".into()));
    }
    let z = k.fundamental_cycle().ok_or(Error::Unoriented)?;
    let mut u = vec![BigRational::zero(); k.count(2)];
    u[0] = value * BigRational::from_integer(z[0].into());
    let t = GerbeConnection::from_global(cover.clone(), &Cochain::new(2, u))?.flat_normal_form()?;
    GerbeConnection::from_triple(cover, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::torus_grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn third_gerbe_on_torus() {
        let k = torus_grid(4).into_arc();
        let cover = Arc::new(Cover::vertex_stars(k.clone()));
        assert!(cover.acyclicity_defects().is_empty());
        let g = fractional_gerbe(cover.clone(), &rat(1, 3)).unwrap();
        let (_, r) = g.total_differential().unwrap();
        assert!(r.entries.values().flatten().all(|x| x.is_integer()));
        assert_eq!(g.holonomy().unwrap(), rat(1, 3));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let asg = PatchAssignment::random(&cover, &mut rng).unwrap();
            let z = Chain::fundamental(&k).unwrap();
            assert_eq!(g.surface_holonomy(&z, Some(&asg)).unwrap(), rat(1, 3));
            let (b0, b1) = random_gauge(&cover, &mut rng);
            let s = random_integral_shift(&cover, &mut rng);
            let h = g.gauge(&b0, &b1, Some(&s)).unwrap();
            h.total_differential().unwrap();
            assert_eq!(h.holonomy().unwrap(), rat(1, 3));
            assert!(h.gauge_equivalent(&g).unwrap());
        }
        assert!(!g.gauge_equivalent(&GerbeConnection::zero(cover)).unwrap());
    }
}
