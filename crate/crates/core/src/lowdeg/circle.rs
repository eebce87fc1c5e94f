//! Circle-valued functions as degree-0 characters.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::complex::{Chain, Cochain, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, frac, parse_rational, reduce_half_open};
use crate::spark::DiscreteSpark;

/// A map from the vertices to `ℝ/ℤ`, in turns, stored in `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleFunction {
    complex: Arc<SimplicialComplex>,
    values: Vec<BigRational>,
}

impl CircleFunction {
    pub fn new(complex: Arc<SimplicialComplex>, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != complex.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} vertices",
                values.len(),
                complex.vertex_count()
            )));
        }
        let values = values.iter().map(frac).collect();
        Ok(CircleFunction { complex, values })
    }

    pub fn constant(complex: Arc<SimplicialComplex>, c: &BigRational) -> Self {
        let values = vec![frac(c); complex.vertex_count()];
        CircleFunction { complex, values }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Pointwise product in `S¹`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !crate::spark::same_complex(&self.complex, &other.complex) {
            return Err(Error::MismatchedComplexes);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Self::new(self.complex.clone(), values)
    }

    /// `f ∘ g` for a simplicial map `g` into the domain of `f`.
    pub fn compose(&self, g: &SimplicialMap) -> Result<Self> {
        if !crate::spark::same_complex(&g.target, &self.complex) {
            return Err(Error::MismatchedComplexes);
        }
        let values = g.vertex_map.iter().map(|&v| self.values[v].clone()).collect();
        Self::new(g.source.clone(), values)
    }

    /// Per-edge jump `R(e) ∈ ℤ` with `δf(e) + R(e) ∈ (-1/2, 1/2]`.
    pub fn winding_cochain(&self) -> Cochain<BigInt> {
        let df = Cochain::new(0, self.values.clone()).coboundary(&self.complex);
        Cochain::new(1, df.values.iter().map(|d| (reduce_half_open(d) - d).to_integer()).collect())
    }

    /// Winding number along an integral 1-cycle.
    pub fn winding_number(&self, z: &Chain<BigInt>) -> Result<BigInt> {
        z.check(&self.complex)?;
        if z.degree != 1 || !z.is_cycle(&self.complex) {
            return Err(Error::NotACycle);
        }
        Ok(self.winding_cochain().evaluate(z))
    }

    pub fn from_json(complex: Arc<SimplicialComplex>, doc: &Value) -> Result<Self> {
        let values = doc
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("circle function needs a \"values\" array".into()))?
            .iter()
            .map(|v| match v {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => n
                    .as_i64()
                    .map(|x| BigRational::from_integer(x.into()))
                    .ok_or_else(|| Error::Parse("use \"p/q\" strings for fractions".into())),
                _ => Err(Error::Parse("value must be a string or integer".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(complex, values)
    }

    pub fn to_json(&self) -> Value {
        json!({ "values": self.values.iter().map(format_rational).collect::<Vec<_>>() })
    }
}

/// The spark `(f, R)` with `R` the winding cochain; its curvature is the
/// reduced difference `δf + R`. On complexes of dimension two or more the
/// winding cochain must be a cocycle, which holds once `f` varies by less than
/// a sixth of a turn along edges.
pub fn spark_of_circle_function(f: &CircleFunction) -> Result<DiscreteSpark> {
    let r = f.winding_cochain();
    if f.complex.dimension() >= 2 {
        let dr = r.coboundary(&f.complex);
        if let Some(t) = dr.values.iter().position(|x| x != &BigInt::from(0)) {
            return Err(Error::Unsupported(format!(
                "circle function jumps too far on triangle {:?}; refine the complex",
                f.complex.simplex(2, t)
            )));
        }
    }
    DiscreteSpark::new(f.complex.clone(), Cochain::new(0, f.values.clone()), r)
}

/// The function `frac(a)` underlying a degree-0 spark.
pub fn circle_function_of_spark(s: &DiscreteSpark) -> Result<CircleFunction> {
    if s.degree() != 0 {
        return Err(Error::DegreeOutOfRange { degree: s.degree() as i64, min: 0, max: 0 });
    }
    CircleFunction::new(s.complex().clone(), s.a().values.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::circle;
    use crate::scalar::rat;

    #[test]
    fn triangle_winds_once() {
        let k = circle(3).into_arc();
        let f = CircleFunction::new(k.clone(), vec![rat(0, 1), rat(1, 3), rat(2, 3)]).unwrap();
        let z = Chain::fundamental(&k).unwrap();
        assert_eq!(f.winding_number(&z).unwrap().magnitude(), &1u32.into());
        let s = spark_of_circle_function(&f).unwrap();
        assert_eq!(circle_function_of_spark(&s).unwrap(), f);
    }

    #[test]
    fn constant_has_zero_curvature() {
        let k = circle(4).into_arc();
        let s = spark_of_circle_function(&CircleFunction::constant(k, &rat(2, 7))).unwrap();
        assert!(s.phi().is_zero() && s.r().is_zero());
    }
}
