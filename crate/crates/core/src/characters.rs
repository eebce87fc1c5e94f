//! Structure of the character groups `Ĥᵏ(X) ≅ (S¹)^{b_k} × dℰᵏ × H^{k+1}(X; ℤ)`,
//! their smooth duals, the exact sequences relating them, and character
//! tables.
//!
//! The factor `dℰᵏ` is represented by `rank δ_k`, the dimension of the
//! exact rational `(k+1)`-cochains.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::cohomology::{
    class_of, coboundary_rank, cohomology_circle, cohomology_data, cohomology_structures,
    kunneth_structure, GroupStructure,
};
use crate::complex::{product_size, Cochain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::scalar::rat;
use crate::spark::{equivalent, flat_spark_from_torsion, spark_from_cocycle, DiscreteSpark};

/// Degree-wise data of a space: f-vector, integral cohomology and
/// coboundary ranks. Built from a complex or, for products too large to
/// triangulate, from the factors by the Künneth formula.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceData {
    pub name: String,
    pub dimension: usize,
    pub f_vector: Vec<usize>,
    /// `Hᵏ(X; ℤ)` for `0 ≤ k ≤ n`.
    pub cohomology: Vec<GroupStructure>,
    /// `rank δ_k` for `0 ≤ k ≤ n`.
    pub coboundary_ranks: Vec<usize>,
    pub oriented: bool,
}

impl SpaceData {
    pub fn from_complex(name: &str, k: &SimplicialComplex) -> Self {
        SpaceData {
            name: name.to_string(),
            dimension: k.dimension(),
            f_vector: k.f_vector(),
            cohomology: cohomology_structures(k),
            coboundary_ranks: (0..=k.dimension()).map(|d| coboundary_rank(k, d)).collect(),
            oriented: k.is_oriented(),
        }
    }

    /// `X × Y` with the staircase f-vector and Künneth cohomology; the
    /// coboundary ranks follow from `f_k = b_k + rank δ_k + rank δ_{k-1}`.
    pub fn kunneth(a: &SpaceData, b: &SpaceData) -> Self {
        let n = a.dimension + b.dimension;
        let f_vector = product_size(&a.f_vector, &b.f_vector);
        let cohomology: Vec<GroupStructure> = (0..=n).map(|k| kunneth_structure(&a.cohomology, &b.cohomology, k)).collect();
        let mut coboundary_ranks = Vec::with_capacity(n + 1);
        let mut prev = 0usize;
        for k in 0..=n {
            let r = f_vector[k] - cohomology[k].free_rank - prev;
            coboundary_ranks.push(r);
            prev = r;
        }
        SpaceData {
            name: format!("{}*{}", a.name, b.name),
            dimension: n,
            f_vector,
            cohomology,
            coboundary_ranks,
            oriented: a.oriented && b.oriented,
        }
    }

    pub fn betti(&self, k: i64) -> usize {
        self.group(k).free_rank
    }

    /// `Hᵏ(X; ℤ)`, zero outside `0..=n`.
    pub fn group(&self, k: i64) -> GroupStructure {
        if k < 0 || k as usize > self.dimension {
            GroupStructure::trivial()
        } else {
            self.cohomology[k as usize].clone()
        }
    }

    pub fn coboundary_rank(&self, k: i64) -> usize {
        if k < 0 || k as usize > self.dimension {
            0
        } else {
            self.coboundary_ranks[k as usize]
        }
    }

    pub fn simplex_count(&self, k: i64) -> usize {
        if k < 0 || k as usize > self.dimension {
            0
        } else {
            self.f_vector[k as usize]
        }
    }

    fn check_degree(&self, k: i64) -> Result<()> {
        if k < -1 || k > self.dimension as i64 {
            return Err(Error::DegreeOutOfRange { degree: k, min: -1, max: self.dimension as i64 });
        }
        Ok(())
    }
}

/// `Ĥᵏ(X) ≅ (S¹)^{torus_rank} × dℰᵏ × discrete`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterStructure {
    pub degree: i64,
    pub torus_rank: usize,
    /// `rank δ_k`, the stand-in for `dℰᵏ`.
    pub exact_dim: usize,
    pub discrete: GroupStructure,
}

impl CharacterStructure {
    /// Factors in the order torus, free, torsion, exact part, e.g.
    /// `(S¹)^2×ℤ×dℰ^1[20]`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        match self.torus_rank {
            0 => {}
            1 => parts.push("S¹".to_string()),
            r => parts.push(format!("(S¹)^{r}")),
        }
        if !self.discrete.is_trivial() {
            parts.push(self.discrete.render());
        }
        if self.exact_dim > 0 {
            parts.push(format!("dℰ^{}[{}]", self.degree, self.exact_dim));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("×")
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "torus_rank": self.torus_rank,
            "exact_dim": self.exact_dim,
            "discrete": self.discrete.to_json(),
            "rendered": self.render(),
        })
    }

    /// Equal torus rank and discrete group; the exact parts are compared
    /// only by whether they vanish.
    pub fn structure_equal(&self, other: &Self) -> bool {
        self.torus_rank == other.torus_rank
            && self.discrete == other.discrete
            && (self.exact_dim == 0) == (other.exact_dim == 0)
    }

    /// The connected component of zero, `Ĥᵏ_∞ ≅ (S¹)^{b_k} × dℰᵏ`.
    pub fn smooth_part(&self) -> (usize, usize) {
        (self.torus_rank, self.exact_dim)
    }
}

/// `Ĥᵏ(X)` for `-1 ≤ k ≤ n`; degree `-1` gives `H⁰(X; ℤ)`.
pub fn character_structure(data: &SpaceData, k: i64) -> Result<CharacterStructure> {
    data.check_degree(k)?;
    Ok(CharacterStructure {
        degree: k,
        torus_rank: if k < 0 { 0 } else { data.betti(k) },
        exact_dim: data.coboundary_rank(k),
        discrete: data.group(k + 1),
    })
}

/// The smooth dual `Hom_∞(Ĥᵏ(X), S¹)`: the torus dualizes to `ℤ^{b_k}`, the
/// free part of `H^{k+1}` to `(S¹)^{b_{k+1}}`, the torsion to itself.
pub fn dual_structure(data: &SpaceData, k: i64) -> Result<CharacterStructure> {
    data.check_degree(k)?;
    if !data.oriented {
        return Err(Error::Unoriented);
    }
    let n = data.dimension as i64;
    let torus_dual = GroupStructure::free(if k < 0 { 0 } else { data.betti(k) });
    let tors = data.group(k + 1).torsion_part();
    Ok(CharacterStructure {
        degree: n - k - 1,
        torus_rank: data.betti(k + 1),
        exact_dim: data.coboundary_rank(k),
        discrete: GroupStructure::direct_sum(&[torus_dual, tors]),
    })
}

/// `Q^{k+1}(X)`: pairs `(φ, u)` of a closed form with integral periods and an
/// integral class with the same real class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QGroup {
    pub degree: i64,
    pub lattice_rank: usize,
    pub torsion: Vec<BigInt>,
    pub exact_dim: usize,
}

pub fn q_group(data: &SpaceData, k: i64) -> Result<QGroup> {
    data.check_degree(k)?;
    let h = data.group(k + 1);
    Ok(QGroup { degree: k + 1, lattice_rank: h.free_rank, torsion: h.torsion, exact_dim: data.coboundary_rank(k) })
}

/// Invariants of a group of the shape `(S¹)^t × ℚ^v × ℤ^f × torsion`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Invariants {
    pub torus: usize,
    pub vector: usize,
    pub free: usize,
    pub torsion: Vec<BigInt>,
}

impl Invariants {
    fn new(torus: usize, vector: usize, g: &GroupStructure) -> Self {
        Invariants { torus, vector, free: g.free_rank, torsion: g.torsion.clone() }
    }

    fn plus(&self, other: &Self) -> Self {
        let g = GroupStructure::direct_sum(&[
            GroupStructure { free_rank: self.free, torsion: self.torsion.clone() },
            GroupStructure { free_rank: other.free, torsion: other.torsion.clone() },
        ]);
        Invariants::new(self.torus + other.torus, self.vector + other.vector, &g)
    }

    fn render(&self) -> String {
        format!("torus {} vector {} {}", self.torus, self.vector, GroupStructure { free_rank: self.free, torsion: self.torsion.clone() }.render())
    }
}

/// One named verification step.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "passed": self.passed, "detail": self.detail})
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceReport {
    pub degree: i64,
    pub checks: Vec<Check>,
}

impl SequenceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "passed": self.passed(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

fn eq_check(name: &str, lhs: &Invariants, rhs: &Invariants) -> Check {
    Check::new(name, lhs == rhs, format!("{} vs {}", lhs.render(), rhs.render()))
}

/// Rank identities and the three-by-three grid of short exact sequences,
/// checked on degree-wise data alone.
pub fn verify_structure(data: &SpaceData, k: i64) -> Result<SequenceReport> {
    data.check_degree(k)?;
    let mut checks = Vec::new();
    let bk = if k < 0 { 0 } else { data.betti(k) };
    let rk = data.coboundary_rank(k);
    let rk_prev = data.coboundary_rank(k - 1);
    let h1 = data.group(k + 1);
    if k >= 0 {
        let ck = data.simplex_count(k);
        checks.push(Check::new(
            "cochain rank identity",
            ck == bk + rk + rk_prev,
            format!("c_k = {ck}, b_k + rank δ_k + rank δ_(k-1) = {}", bk + rk + rk_prev),
        ));
    }
    // dim ker δ_{k+1} = rank δ_k + b_{k+1}
    let z0_vec = data.simplex_count(k + 1) - data.coboundary_rank(k + 1) - h1.free_rank;
    checks.push(Check::new(
        "closed cochains split",
        z0_vec == rk,
        format!("dim ker δ_(k+1) - b_(k+1) = {z0_vec}, rank δ_k = {rk}"),
    ));
    let cs = character_structure(data, k)?;
    let zero = GroupStructure::trivial();
    let t = Invariants::new(bk, 0, &zero);
    let h_inf = Invariants::new(cs.torus_rank, cs.exact_dim, &zero);
    let de = Invariants::new(0, rk, &zero);
    let circle = Invariants::new(bk, 0, &h1.torsion_part());
    let hat = Invariants::new(cs.torus_rank, cs.exact_dim, &cs.discrete);
    let z0 = Invariants::new(0, z0_vec, &h1.free_part());
    let tors = Invariants::new(0, 0, &h1.torsion_part());
    let h = Invariants::new(0, 0, &h1);
    let free = Invariants::new(0, 0, &h1.free_part());
    checks.push(eq_check("row: smooth characters", &h_inf, &t.plus(&de)));
    checks.push(eq_check("row: characters over flat classes", &hat, &circle.plus(&z0)));
    checks.push(eq_check("row: integral cohomology", &h, &tors.plus(&free)));
    checks.push(eq_check("column: circle cohomology", &circle, &t.plus(&tors)));
    checks.push(eq_check("column: characters", &hat, &h_inf.plus(&h)));
    checks.push(eq_check("column: closed integral-period cochains", &z0, &de.plus(&free)));
    let q = q_group(data, k)?;
    let qi = Invariants { torus: 0, vector: q.exact_dim, free: q.lattice_rank, torsion: q.torsion.clone() };
    checks.push(eq_check("characters modulo torus are Q", &hat, &t.plus(&qi)));
    let qz = Invariants { torsion: Vec::new(), ..qi.clone() };
    checks.push(eq_check("Q over torsion is the closed lattice", &qz, &z0));
    checks.push(Check::new("lattice rank of Q", q.lattice_rank == h1.free_rank, format!("{} vs {}", q.lattice_rank, h1.free_rank)));
    Ok(SequenceReport { degree: k, checks })
}

/// Structural checks plus constructive witnesses: `δ₂`-preimages of the
/// generators of `H^{k+1}`, flat sparks for the torus and torsion parts of
/// `ker δ₁`, and `δ₁`-preimages of a spanning set of closed cochains with
/// integral periods.
pub fn verify_sequences(complex: &Arc<SimplicialComplex>, k: i64) -> Result<SequenceReport> {
    let data = SpaceData::from_complex("", complex);
    let mut report = verify_structure(&data, k)?;
    if k < 0 {
        let h0 = cohomology_data(complex, 0)?;
        report.checks.push(Check::new(
            "degree -1 is H0",
            h0.structure == GroupStructure::free(complex.components().iter().max().map_or(0, |m| m + 1)),
            h0.structure.render(),
        ));
        return Ok(report);
    }
    let deg = k as usize;
    let n = complex.dimension();
    let checks = &mut report.checks;

    // (A) δ₂ is onto H^{k+1}.
    if deg < n {
        let h = cohomology_data(complex, deg + 1)?;
        let mut ok = true;
        for g in &h.generators {
            let g = Cochain::new(deg + 1, g.clone());
            let s = spark_from_cocycle(complex, &g)?;
            ok &= s.d2()? == class_of(complex, &g)? && s.phi().coboundary(complex).is_zero();
        }
        checks.push(Check::new("δ₂ preimages of H^(k+1) generators", ok, format!("{} generators", h.generators.len())));
    }

    // Torus: (t·g, 0) is flat, nonzero for t = 1/2, zero for t = 1.
    let hk = cohomology_data(complex, deg)?;
    let free_gens: Vec<Cochain<BigInt>> =
        hk.generators[..hk.structure.free_rank].iter().map(|g| Cochain::new(deg, g.clone())).collect();
    let mut torus_ok = true;
    for g in &free_gens {
        let zero = DiscreteSpark::zero(complex.clone(), deg)?;
        let half = DiscreteSpark::new(complex.clone(), g.to_rational().scale(&rat(1, 2)), Cochain::zero(complex, deg + 1))?;
        let whole = DiscreteSpark::new(complex.clone(), g.to_rational(), Cochain::zero(complex, deg + 1))?;
        torus_ok &= half.phi().is_zero() && !equivalent(&half, &zero)? && equivalent(&whole, &zero)?;
    }
    checks.push(Check::new("flat torus sparks", torus_ok, format!("{} circle factors", free_gens.len())));

    // Torsion: flat sparks with δ₂ = -[T] ≠ 0.
    let circle = cohomology_circle(complex, deg)?;
    let mut tors_count = 0;
    let mut tors_ok = true;
    if deg < n {
        let h = cohomology_data(complex, deg + 1)?;
        for t in &h.generators[h.structure.free_rank..] {
            let t = Cochain::new(deg + 1, t.clone());
            let s = flat_spark_from_torsion(complex, &t, &BigInt::one())?;
            tors_ok &= s.phi().is_zero() && s.d2()? == class_of(complex, &t.neg())? && !s.d2()?.is_zero();
            tors_count += 1;
        }
    }
    checks.push(Check::new(
        "ker δ₁ is circle cohomology",
        tors_ok && circle.torus_rank == free_gens.len() && circle.torsion.len() == tors_count,
        format!("torus {} torsion {:?}", circle.torus_rank, circle.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()),
    ));

    // (B) δ₁ is onto closed cochains with integral periods: free generators
    // of H^{k+1} and coboundaries of basis cochains span them.
    if deg < n {
        let h = cohomology_data(complex, deg + 1)?;
        let mut ok = true;
        for g in &h.generators[..h.structure.free_rank] {
            let g = Cochain::new(deg + 1, g.clone());
            let s = DiscreteSpark::new(complex.clone(), Cochain::zero(complex, deg), g.clone())?;
            ok &= s.phi() == g.to_rational();
        }
        for i in 0..complex.count(deg) {
            let e = Cochain::<BigRational>::basis(complex, deg, i);
            let s = DiscreteSpark::new(complex.clone(), e.clone(), Cochain::zero(complex, deg + 1))?;
            ok &= s.phi() == e.coboundary(complex);
        }
        checks.push(Check::new(
            "δ₁ preimages of closed integral-period cochains",
            ok,
            format!("{} lattice generators, {} coboundaries", h.structure.free_rank, complex.count(deg)),
        ));
    }
    Ok(report)
}

/// One row per degree `-1..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterTable {
    pub name: String,
    pub dimension: usize,
    pub rows: Vec<CharacterStructure>,
}

pub fn character_table(data: &SpaceData) -> CharacterTable {
    let rows = (-1..=data.dimension as i64).map(|k| character_structure(data, k).unwrap()).collect();
    CharacterTable { name: data.name.clone(), dimension: data.dimension, rows }
}

impl CharacterTable {
    pub fn to_markdown(&self) -> String {
        let mut s = format!("| k | Ĥ^k({}) | torus | exact | discrete |\n|---|---|---|---|---|\n", self.name);
        for r in &self.rows {
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                r.degree,
                r.render(),
                r.torus_rank,
                r.exact_dim,
                r.discrete.render()
            ));
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,character,torus_rank,exact_dim,free_rank,torsion\n");
        for r in &self.rows {
            let tors: Vec<String> = r.discrete.torsion.iter().map(|t| t.to_string()).collect();
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.degree,
                r.render(),
                r.torus_rank,
                r.exact_dim,
                r.discrete.free_rank,
                tors.join(";")
            ));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "space": self.name,
            "dimension": self.dimension,
            "rows": self.rows.iter().map(CharacterStructure::to_json).collect::<Vec<_>>(),
        })
    }
}
