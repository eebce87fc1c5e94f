//! Sparks `(a, R)`: construction, the differentials `δ₁ = φ` and
//! `δ₂ = [R]`, equivalence, holonomy, pullback, the `*`-product, the duality
//! pairing and the torsion linking pairing.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::cohomology::{class_of, cohomology_data, cycle_lattice_basis, integral_primitive, rational_primitive, ClassCoordinates};
use crate::complex::{cochain_from_json, cochain_to_json, cup_product, Chain, Cochain, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::scalar::{frac, is_integral, rat};

/// A spark of degree `k`: rational `k`-cochain `a`, integral `(k+1)`-cocycle
/// `R`, curvature `φ = δa + R`.
#[derive(Clone, Debug)]
pub struct DiscreteSpark {
    complex: Arc<SimplicialComplex>,
    a: Cochain<BigRational>,
    r: Cochain<BigInt>,
}

pub(crate) fn same_complex(x: &Arc<SimplicialComplex>, y: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(x, y) || **x == **y
}

/// `u ∪ v`, or the empty cochain when the degree exceeds the dimension.
pub fn cup_or_empty<T: crate::scalar::Ring>(k: &SimplicialComplex, u: &Cochain<T>, v: &Cochain<T>) -> Result<Cochain<T>> {
    if u.degree + v.degree > k.dimension() {
        return Ok(Cochain::new(u.degree + v.degree, Vec::new()));
    }
    cup_product(k, u, v)
}

impl DiscreteSpark {
    pub fn new(complex: Arc<SimplicialComplex>, a: Cochain<BigRational>, r: Cochain<BigInt>) -> Result<Self> {
        let n = complex.dimension();
        if a.degree > n {
            return Err(Error::DegreeOutOfRange { degree: a.degree as i64, min: 0, max: n as i64 });
        }
        if r.degree != a.degree + 1 {
            return Err(Error::DimensionMismatch(format!("a has degree {}, R has degree {}", a.degree, r.degree)));
        }
        a.check(&complex)?;
        r.check(&complex)?;
        if !r.coboundary(&complex).is_zero() {
            return Err(Error::NotACocycle);
        }
        Ok(DiscreteSpark { complex, a, r })
    }

    pub fn zero(complex: Arc<SimplicialComplex>, degree: usize) -> Result<Self> {
        let a = Cochain::zero(&complex, degree);
        let r = Cochain::zero(&complex, degree + 1);
        Self::new(complex, a, r)
    }

    pub fn degree(&self) -> usize {
        self.a.degree
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn a(&self) -> &Cochain<BigRational> {
        &self.a
    }

    pub fn r(&self) -> &Cochain<BigInt> {
        &self.r
    }

    /// `φ = δa + R`
    pub fn phi(&self) -> Cochain<BigRational> {
        self.a.coboundary(&self.complex).add(&self.r.to_rational())
    }

    pub fn d1(&self) -> Cochain<BigRational> {
        self.phi()
    }

    /// Class of `R` in `H^{k+1}(X; ℤ)`.
    pub fn d2(&self) -> Result<ClassCoordinates> {
        if self.r.degree > self.complex.dimension() {
            return Ok(ClassCoordinates { free: Vec::new(), torsion: Vec::new() });
        }
        class_of(&self.complex, &self.r)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if !same_complex(&self.complex, &other.complex) {
            return Err(Error::MismatchedComplexes);
        }
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch(format!("degrees {} and {}", self.degree(), other.degree())));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(DiscreteSpark { complex: self.complex.clone(), a: self.a.add(&other.a), r: self.r.add(&other.r) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(DiscreteSpark { complex: self.complex.clone(), a: self.a.sub(&other.a), r: self.r.sub(&other.r) })
    }

    pub fn neg(&self) -> Self {
        DiscreteSpark { complex: self.complex.clone(), a: self.a.neg(), r: self.r.neg() }
    }

    pub fn scale(&self, m: &BigInt) -> Self {
        let q = BigRational::from_integer(m.clone());
        DiscreteSpark { complex: self.complex.clone(), a: self.a.scale(&q), r: self.r.scale(m) }
    }

    /// `(a + δb - S, R + δS)`, an equivalent spark; `b` is ignored in
    /// degree 0.
    pub fn shifted(&self, b: &Cochain<BigRational>, s: &Cochain<BigInt>) -> Result<Self> {
        let k = self.degree();
        let mut a = self.a.sub(&s.to_rational());
        if k > 0 {
            if b.degree + 1 != k {
                return Err(Error::DimensionMismatch("b must have degree k - 1".into()));
            }
            a = a.add(&b.coboundary(&self.complex));
        }
        let r = self.r.add(&s.coboundary(&self.complex));
        Self::new(self.complex.clone(), a, r)
    }

    /// `a(z) mod 1` on an integral cycle.
    pub fn holonomy(&self, z: &Chain<BigInt>) -> Result<BigRational> {
        if z.degree != self.degree() {
            return Err(Error::DimensionMismatch(format!("cycle of degree {} for spark of degree {}", z.degree, self.degree())));
        }
        z.check(&self.complex)?;
        if !z.is_cycle(&self.complex) {
            return Err(Error::NotACycle);
        }
        Ok(frac(&self.a.evaluate_int(z)))
    }

    /// `f^* s` for `f: source → target`, where `s` lives on `target`.
    pub fn pullback(&self, f: &SimplicialMap) -> Result<Self> {
        if !same_complex(&f.target, &self.complex) {
            return Err(Error::MismatchedComplexes);
        }
        let n = f.source.dimension();
        if self.degree() > n {
            return Err(Error::DegreeOutOfRange { degree: self.degree() as i64, min: 0, max: n as i64 });
        }
        let t = f.transfer();
        let a = t.pull_cochain(&self.a);
        let r = if self.r.degree > n { Cochain::zero(&f.source, self.r.degree) } else { t.pull_cochain(&self.r) };
        Self::new(f.source.clone(), a, r)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree(),
            "a": cochain_to_json(&self.a, false),
            "R": cochain_to_json(&self.r.to_rational(), true),
        })
    }

    pub fn from_json(complex: Arc<SimplicialComplex>, doc: &Value) -> Result<Self> {
        let (a, _) = cochain_from_json(doc.get("a").ok_or_else(|| Error::Parse("spark without \"a\"".into()))?)?;
        let (r, _) = cochain_from_json(doc.get("R").ok_or_else(|| Error::Parse("spark without \"R\"".into()))?)?;
        if r.values.iter().any(|x| !x.is_integer()) {
            return Err(Error::Parse("R must be integral".into()));
        }
        if let Some(k) = doc.get("degree").and_then(Value::as_u64) {
            if k as usize != a.degree {
                return Err(Error::DimensionMismatch(format!("declared degree {k}, a has degree {}", a.degree)));
            }
        }
        Self::new(complex, a, r.map(|x| x.to_integer()))
    }
}

/// A spark with `δ₂ = [R]` whose curvature is the harmonic (least-squares)
/// representative of `R`.
pub fn spark_from_cocycle(complex: &Arc<SimplicialComplex>, r: &Cochain<BigInt>) -> Result<DiscreteSpark> {
    if r.degree == 0 {
        return Err(Error::DegreeOutOfRange { degree: -1, min: 0, max: complex.dimension() as i64 });
    }
    r.check(complex)?;
    if !r.coboundary(complex).is_zero() {
        return Err(Error::NotACocycle);
    }
    let k = r.degree - 1;
    if r.degree > complex.dimension() {
        return DiscreteSpark::new(complex.clone(), Cochain::zero(complex, k), r.clone());
    }
    let rq = r.to_rational();
    let phi = crate::hodge::harmonic_part(complex, &rq)?;
    let a = rational_primitive(complex, &phi.sub(&rq))
        .ok_or_else(|| Error::Unsupported("harmonic part does not differ from R by a coboundary".into()))?;
    DiscreteSpark::new(complex.clone(), a, r.clone())
}

/// Order of the class of an integral cocycle; `NotTorsion` for classes of
/// infinite order.
pub fn torsion_order(complex: &SimplicialComplex, t: &Cochain<BigInt>) -> Result<BigInt> {
    let data = cohomology_data(complex, t.degree)?;
    let c = data.coordinates(&t.values).ok_or(Error::NotACocycle)?;
    if c.free.iter().any(|x| !x.is_zero()) {
        return Err(Error::NotTorsion);
    }
    let mut m = BigInt::one();
    for (x, d) in c.torsion.iter().zip(&data.structure.torsion) {
        let o = d / x.gcd(d);
        m = m.lcm(&o);
    }
    Ok(m)
}

/// For a torsion class `T` of order `m` with `m·T = δS`: the flat spark
/// `((j/m)·S, -j·T)`.
pub fn flat_spark_from_torsion(complex: &Arc<SimplicialComplex>, t: &Cochain<BigInt>, j: &BigInt) -> Result<DiscreteSpark> {
    t.check(complex)?;
    if t.degree == 0 {
        return Err(Error::NotTorsion);
    }
    let m = torsion_order(complex, t)?;
    let s = integral_primitive(complex, &t.scale(&m)).ok_or(Error::NotTorsion)?;
    let coeff = BigRational::new(j.clone(), m);
    DiscreteSpark::new(complex.clone(), s.to_rational().scale(&coeff), t.scale(&-j))
}

/// Decides `s1 ~ s2`: equal curvature, equal class of `R`, and integral
/// periods of `a₁ - a₂` on a lattice basis of `k`-cycles.
pub fn equivalent(s1: &DiscreteSpark, s2: &DiscreteSpark) -> Result<bool> {
    s1.compatible(s2)?;
    if s1.phi() != s2.phi() {
        return Ok(false);
    }
    let k = &s1.complex;
    let dr = s1.r.sub(&s2.r);
    if dr.degree <= k.dimension() && !class_of(k, &dr)?.is_zero() {
        return Ok(false);
    }
    let da = s1.a.sub(&s2.a);
    for z in cycle_lattice_basis(k, s1.degree())? {
        if !is_integral(&da.evaluate_int(&z)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sign(k: usize) -> BigRational {
    if k % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn check_star_degrees(s1: &DiscreteSpark, s2: &DiscreteSpark) -> Result<()> {
    if !same_complex(&s1.complex, &s2.complex) {
        return Err(Error::MismatchedComplexes);
    }
    let d = s1.degree() + s2.degree() + 1;
    let n = s1.complex.dimension();
    if d > n {
        return Err(Error::DegreeOutOfRange { degree: d as i64, min: 0, max: n as i64 });
    }
    Ok(())
}

/// `s1 * s2 = (a₁∪φ₂ + (-1)^{k+1} R₁∪a₂, R₁∪R₂)`
pub fn star(s1: &DiscreteSpark, s2: &DiscreteSpark) -> Result<DiscreteSpark> {
    check_star_degrees(s1, s2)?;
    let k = &s1.complex;
    let r1 = s1.r.to_rational();
    let a = cup_product(k, &s1.a, &s2.phi())?.add(&cup_product(k, &r1, &s2.a)?.scale(&sign(s1.degree() + 1)));
    let r = cup_or_empty(k, &s1.r, &s2.r)?;
    DiscreteSpark::new(k.clone(), a, r)
}

/// The second product formula `(a₁∪R₂ + (-1)^{k+1} φ₁∪a₂, R₁∪R₂)`; it differs
/// from [`star`] by `(-1)^k δ(a₁∪a₂)`.
pub fn star_tilde(s1: &DiscreteSpark, s2: &DiscreteSpark) -> Result<DiscreteSpark> {
    check_star_degrees(s1, s2)?;
    let k = &s1.complex;
    let a = cup_product(k, &s1.a, &s2.r.to_rational())?
        .add(&cup_product(k, &s1.phi(), &s2.a)?.scale(&sign(s1.degree() + 1)));
    let r = cup_or_empty(k, &s1.r, &s2.r)?;
    DiscreteSpark::new(k.clone(), a, r)
}

/// A graded element: the degree `-1` unit group `ℤ` acting by scalars, or a
/// spark.
#[derive(Clone, Debug)]
pub enum GradedElement {
    Unit(BigInt),
    Spark(DiscreteSpark),
}

impl GradedElement {
    pub fn degree(&self) -> i64 {
        match self {
            GradedElement::Unit(_) => -1,
            GradedElement::Spark(s) => s.degree() as i64,
        }
    }
}

pub fn star_graded(x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
    use GradedElement::*;
    Ok(match (x, y) {
        (Unit(m), Unit(l)) => Unit(m * l),
        (Unit(m), Spark(s)) | (Spark(s), Unit(m)) => Spark(s.scale(m)),
        (Spark(a), Spark(b)) => Spark(star(a, b)?),
    })
}

/// Holonomy of `s1 * s2` on the fundamental cycle.
pub fn duality_pair(s1: &DiscreteSpark, s2: &DiscreteSpark) -> Result<BigRational> {
    let k = &s1.complex;
    let fund = Chain::fundamental(k).ok_or(Error::Unoriented)?;
    if s1.degree() + s2.degree() + 1 != k.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "degrees {} and {} are not complementary in dimension {}",
            s1.degree(),
            s2.degree(),
            k.dimension()
        )));
    }
    star(s1, s2)?.holonomy(&fund)
}

/// `Lk(u, v) = (1/m)⟨S∪T_v, [X]⟩ mod 1` with `m·T_u = δS`.
pub fn linking(complex: &SimplicialComplex, tu: &Cochain<BigInt>, tv: &Cochain<BigInt>) -> Result<BigRational> {
    let m = torsion_order(complex, tu)?;
    torsion_order(complex, tv)?;
    let s = integral_primitive(complex, &tu.scale(&m)).ok_or(Error::NotTorsion)?;
    linking_with_witness(complex, tu, &m, &s, tv)
}

/// Linking number computed from a caller-supplied witness `m·T_u = δS`.
pub fn linking_with_witness(
    complex: &SimplicialComplex,
    tu: &Cochain<BigInt>,
    m: &BigInt,
    s: &Cochain<BigInt>,
    tv: &Cochain<BigInt>,
) -> Result<BigRational> {
    let fund = Chain::fundamental(complex).ok_or(Error::Unoriented)?;
    let n = complex.dimension();
    if tu.degree == 0 || tu.degree + tv.degree != n + 1 {
        return Err(Error::DimensionMismatch(format!("degrees {} and {} do not link in dimension {n}", tu.degree, tv.degree)));
    }
    if !m.is_positive() || s.coboundary(complex) != tu.scale(m) {
        return Err(Error::Unsupported("witness does not satisfy m·T = δS".into()));
    }
    let pairing = cup_product(complex, s, tv)?.evaluate(&fund);
    Ok(frac(&BigRational::new(pairing, m.clone())))
}

/// Linking matrix on the torsion generators of `H^{k+1}` and `H^{n-k}`.
pub fn linking_matrix(complex: &SimplicialComplex, k: usize) -> Result<Vec<Vec<BigRational>>> {
    let n = complex.dimension();
    if k + 1 > n {
        return Err(Error::DegreeOutOfRange { degree: k as i64, min: 0, max: n as i64 - 1 });
    }
    let hu = crate::cohomology::cohomology_z(complex, k + 1)?;
    let hv = crate::cohomology::cohomology_z(complex, n - k)?;
    hu.torsion_generators()
        .iter()
        .map(|u| hv.torsion_generators().iter().map(|v| linking(complex, u, v)).collect())
        .collect()
}

/// Random integral `deg`-cocycle: a small combination of generators plus a
/// random integral coboundary.
pub fn random_cocycle(complex: &SimplicialComplex, deg: usize, rng: &mut impl Rng) -> Result<Cochain<BigInt>> {
    if deg > complex.dimension() {
        return Ok(Cochain::new(deg, Vec::new()));
    }
    let h = cohomology_data(complex, deg)?;
    let mut r = Cochain::<BigInt>::zero(complex, deg);
    for g in &h.generators {
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        r = r.add(&Cochain::new(deg, g.clone()).scale(&c));
    }
    if deg > 0 {
        let b = Cochain::from_i64(deg - 1, &(0..complex.count(deg - 1)).map(|_| rng.gen_range(-1i64..=1)).collect::<Vec<_>>());
        r = r.add(&b.coboundary(complex));
    }
    Ok(r)
}

/// Random rational `deg`-cochain with small numerators and denominators.
pub fn random_rational(complex: &SimplicialComplex, deg: usize, rng: &mut impl Rng) -> Cochain<BigRational> {
    Cochain::new(deg, (0..complex.count(deg)).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=6))).collect())
}

pub fn random_spark(complex: &Arc<SimplicialComplex>, deg: usize, rng: &mut impl Rng) -> Result<DiscreteSpark> {
    let a = random_rational(complex, deg, rng);
    let r = random_cocycle(complex, deg + 1, rng)?;
    DiscreteSpark::new(complex.clone(), a, r)
}
