//! U(1) lattice connections as degree-1 characters.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::cohomology::rational_primitive;
use crate::complex::{Chain, Cochain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, frac, parse_rational, rat, rat_int, reduce_half_open};
use crate::spark::DiscreteSpark;

/// An angle per edge in turns, in `(-1/2, 1/2]`, for the sorted orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeConnection {
    complex: Arc<SimplicialComplex>,
    angles: Vec<BigRational>,
}

impl LatticeConnection {
    pub fn new(complex: Arc<SimplicialComplex>, angles: Vec<BigRational>) -> Result<Self> {
        if angles.len() != complex.count(1) {
            return Err(Error::DimensionMismatch(format!("{} angles for {} edges", angles.len(), complex.count(1))));
        }
        let angles = angles.iter().map(reduce_half_open).collect();
        Ok(LatticeConnection { complex, angles })
    }

    pub fn zero(complex: Arc<SimplicialComplex>) -> Self {
        let angles = vec![BigRational::zero(); complex.count(1)];
        LatticeConnection { complex, angles }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn angles(&self) -> &[BigRational] {
        &self.angles
    }

    /// Angle from `u` to `v`; reversing the edge negates it.
    pub fn angle(&self, u: usize, v: usize) -> Option<BigRational> {
        let (lo, hi, sign) = if u < v { (u, v, 1) } else { (v, u, -1) };
        self.complex.index_of(&[lo, hi]).map(|e| &self.angles[e] * rat_int(sign))
    }

    pub fn as_cochain(&self) -> Cochain<BigRational> {
        Cochain::new(1, self.angles.clone())
    }

    /// The gauge transform `θ + δg` by vertex angles `g`.
    pub fn gauge(&self, g: &[BigRational]) -> Result<Self> {
        if g.len() != self.complex.vertex_count() {
            return Err(Error::DimensionMismatch("gauge needs one angle per vertex".into()));
        }
        let dg = Cochain::new(0, g.to_vec()).coboundary(&self.complex);
        Self::new(self.complex.clone(), self.as_cochain().add(&dg).values)
    }

    /// Sum of angles along an integral 1-cycle, mod 1.
    pub fn holonomy(&self, z: &Chain<BigInt>) -> Result<BigRational> {
        z.check(&self.complex)?;
        if z.degree != 1 || !z.is_cycle(&self.complex) {
            return Err(Error::NotACycle);
        }
        Ok(frac(&self.as_cochain().evaluate_int(z)))
    }

    /// `(F, C)`: the reduced curvature `F = red(δθ)` and the integral Chern
    /// cocycle `C = F - δθ`.
    pub fn chern_cocycle(&self) -> Result<(Cochain<BigRational>, Cochain<BigInt>)> {
        if self.complex.dimension() < 2 {
            return Err(Error::DegreeOutOfRange { degree: 2, min: 0, max: self.complex.dimension() as i64 });
        }
        let dt = self.as_cochain().coboundary(&self.complex);
        let f: Vec<BigRational> = dt.values.iter().map(reduce_half_open).collect();
        let c = f.iter().zip(&dt.values).map(|(f, d)| (f - d).to_integer()).collect();
        Ok((Cochain::new(2, f), Cochain::new(2, c)))
    }

    /// `⟨F, [X]⟩` on a closed oriented surface.
    pub fn chern_number(&self) -> Result<BigInt> {
        if self.complex.dimension() != 2 {
            return Err(Error::DegreeOutOfRange { degree: 2, min: 0, max: self.complex.dimension() as i64 });
        }
        let z = Chain::fundamental(&self.complex).ok_or(Error::Unoriented)?;
        let (f, _) = self.chern_cocycle()?;
        Ok(f.evaluate_int(&z).to_integer())
    }

    pub fn from_json(complex: Arc<SimplicialComplex>, doc: &Value) -> Result<Self> {
        let angles = doc
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("connection needs an \"edges\" array".into()))?
            .iter()
            .map(|v| match v {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => n
                    .as_i64()
                    .map(|x| rat_int(x))
                    .ok_or_else(|| Error::Parse("use \"p/q\" strings for fractions".into())),
                _ => Err(Error::Parse("angle must be a string or integer".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(complex, angles)
    }

    pub fn to_json(&self) -> Value {
        json!({ "edges": self.angles.iter().map(format_rational).collect::<Vec<_>>() })
    }
}

/// The spark `(θ - red(δp), C - δJ)` for a section with vertex phases `p`,
/// where `J = δp - red(δp)` counts reduction jumps. Its curvature is `F` and
/// its class is the Chern class; a phase difference of exactly half a turn
/// is rejected.
pub fn spark_of_connection(c: &LatticeConnection, section: Option<&[BigRational]>) -> Result<DiscreteSpark> {
    let k = &c.complex;
    let (_, chern) = c.chern_cocycle()?;
    let zeros = vec![BigRational::zero(); k.vertex_count()];
    let p = section.unwrap_or(&zeros);
    if p.len() != k.vertex_count() {
        return Err(Error::DimensionMismatch("section needs one phase per vertex".into()));
    }
    let dp = Cochain::new(0, p.to_vec()).coboundary(k);
    let half = rat(1, 2);
    let mut red = Vec::with_capacity(dp.len());
    let mut jumps = Vec::with_capacity(dp.len());
    for (e, d) in dp.values.iter().enumerate() {
        if frac(d) == half {
            return Err(Error::DegenerateSection(k.simplex(1, e).clone()));
        }
        let r = reduce_half_open(d);
        jumps.push((d - &r).to_integer());
        red.push(r);
    }
    let a = c.as_cochain().sub(&Cochain::new(1, red));
    let r = chern.sub(&Cochain::new(1, jumps).coboundary(k));
    DiscreteSpark::new(k.clone(), a, r)
}

/// A connection on a closed oriented surface whose curvature is
/// `charge / #faces` on every face, with Chern number `charge`.
pub fn monopole(complex: Arc<SimplicialComplex>, charge: i64) -> Result<LatticeConnection> {
    if complex.dimension() != 2 {
        return Err(Error::Unsupported("monopoles live on surfaces".into()));
    }
    let z = complex.fundamental_cycle().ok_or(Error::Unoriented)?.to_vec();
    let faces = complex.count(2) as i64;
    let per = rat(charge, faces);
    if per.abs() >= rat(1, 2) {
        return Err(Error::Unsupported(format!("charge {charge} needs more than {faces} faces")));
    }
    let mut target: Vec<BigRational> = z.iter().map(|&s| &per * rat_int(s)).collect();
    target[0] -= rat_int(charge * z[0]);
    let theta = rational_primitive(&complex, &Cochain::new(2, target))
        .ok_or_else(|| Error::Unsupported("surface has more than one component".into()))?;
    LatticeConnection::new(complex, theta.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::class_of;
    use crate::complex::{circle, sphere};
    use crate::spark::equivalent;

    #[test]
    fn quarter_turns_around_triangle() {
        let k = circle(3).into_arc();
        // edges [01], [02], [12]; the loop 0→1→2→0 is [01] + [12] - [02]
        let c = LatticeConnection::new(k, vec![rat(1, 4), rat(-1, 4), rat(1, 4)]).unwrap();
        let z = Chain::from_i64(1, &[1, -1, 1]);
        assert_eq!(c.holonomy(&z).unwrap(), rat(3, 4));
    }

    #[test]
    fn monopole_on_sphere() {
        let k = sphere(2).into_arc();
        let c = monopole(k.clone(), 1).unwrap();
        assert_eq!(c.chern_number().unwrap(), 1.into());
        let (f, chern) = c.chern_cocycle().unwrap();
        assert!(f.values.iter().all(|x| x.abs() == rat(1, 4)));
        let s = spark_of_connection(&c, None).unwrap();
        assert_eq!(s.phi(), f);
        assert_eq!(s.d2().unwrap(), class_of(&k, &chern).unwrap());
        let section = [rat(1, 10), rat(2, 7), rat(-1, 3), rat(4, 9)];
        let t = spark_of_connection(&c, Some(&section)).unwrap();
        assert!(equivalent(&s, &t).unwrap());
    }

    #[test]
    fn half_turn_section_is_degenerate() {
        let k = sphere(2).into_arc();
        let c = LatticeConnection::zero(k);
        let section = [rat(0, 1), rat(1, 2), rat(0, 1), rat(0, 1)];
        assert!(matches!(spark_of_connection(&c, Some(&section)), Err(Error::DegenerateSection(_))));
    }
}
