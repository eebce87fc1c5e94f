//! JSON documents for complexes and cochains.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use super::{Cochain, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub(crate) fn as_simplex(v: &Value) -> Result<Simplex> {
    v.as_array()
        .ok_or_else(|| parse_err("simplex must be an array"))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| parse_err("vertex must be a nonnegative integer")))
        .collect()
}

/// Parses a complex document. With `auto_close`, missing faces are added.
pub fn complex_from_json(doc: &Value, auto_close: bool) -> Result<SimplicialComplex> {
    let obj = doc.as_object().ok_or_else(|| parse_err("complex document must be an object"))?;
    let vertices = obj
        .get("vertices")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("missing \"vertices\""))? as usize;
    let simplices = obj
        .get("simplices")
        .and_then(Value::as_object)
        .ok_or_else(|| parse_err("missing \"simplices\""))?;
    let mut lists: Vec<Vec<Simplex>> = vec![Vec::new()];
    for (key, list) in simplices {
        let k: usize = key.parse().map_err(|_| parse_err(format!("bad dimension key {key:?}")))?;
        while lists.len() <= k {
            lists.push(Vec::new());
        }
        for s in list.as_array().ok_or_else(|| parse_err("simplex list must be an array"))? {
            lists[k].push(as_simplex(s)?);
        }
    }
    if lists[0].is_empty() {
        lists[0] = (0..vertices).map(|v| vec![v]).collect();
    }
    let mut k = SimplicialComplex::from_simplices(vertices, &lists, auto_close)?;
    if let Some(dim) = obj.get("dimension").and_then(Value::as_u64) {
        if dim as usize != k.dimension() {
            return Err(Error::InvalidComplex(format!("declared dimension {dim}, found {}", k.dimension())));
        }
    }
    if let Some(fc) = obj.get("fundamental_cycle") {
        let n = k.dimension();
        let mut coeffs = vec![0i64; k.count(n)];
        for term in fc.as_array().ok_or_else(|| parse_err("fundamental_cycle must be an array"))? {
            let s = as_simplex(term.get("simplex").ok_or_else(|| parse_err("term without simplex"))?)?;
            let c = term.get("coeff").and_then(Value::as_i64).ok_or_else(|| parse_err("term without coeff"))?;
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if sorted.len() != n + 1 {
                return Err(Error::NotACycleFundamental);
            }
            let i = k.index_of(&sorted).ok_or(Error::NotACycleFundamental)?;
            coeffs[i] += c;
        }
        k.set_fundamental_cycle(coeffs)?;
    }
    Ok(k)
}

pub fn load_complex(text: &str, auto_close: bool) -> Result<SimplicialComplex> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    complex_from_json(&v, auto_close)
}

pub fn complex_to_json(k: &SimplicialComplex) -> Value {
    let mut simplices = Map::new();
    for d in 1..=k.dimension() {
        simplices.insert(d.to_string(), json!(k.simplices(d)));
    }
    let mut doc = Map::new();
    doc.insert("dimension".into(), json!(k.dimension()));
    doc.insert("vertices".into(), json!(k.vertex_count()));
    doc.insert("simplices".into(), Value::Object(simplices));
    if let Some(f) = k.fundamental_cycle() {
        let terms: Vec<Value> = k
            .simplices(k.dimension())
            .iter()
            .zip(f)
            .map(|(s, c)| json!({"simplex": s, "coeff": c}))
            .collect();
        doc.insert("fundamental_cycle".into(), Value::Array(terms));
    }
    Value::Object(doc)
}

/// `{"degree": k, "ring": "RAT", "values": ["p/q", ...]}`
pub fn cochain_to_json(u: &Cochain<BigRational>, integral: bool) -> Value {
    json!({
        "degree": u.degree,
        "ring": if integral { "INT" } else { "RAT" },
        "values": u.values.iter().map(format_rational).collect::<Vec<_>>(),
    })
}

/// Parses a cochain document; `INT` cochains must have integer entries.
/// Values may be strings `"p/q"` or JSON integers.
pub fn cochain_from_json(doc: &Value) -> Result<(Cochain<BigRational>, bool)> {
    let degree = doc.get("degree").and_then(Value::as_u64).ok_or_else(|| parse_err("cochain without degree"))?;
    let ring = doc.get("ring").and_then(Value::as_str).unwrap_or("RAT");
    let integral = match ring {
        "INT" => true,
        "RAT" => false,
        other => return Err(parse_err(format!("unknown ring {other:?}"))),
    };
    let values = doc
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("cochain without values"))?
        .iter()
        .map(|v| match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => n
                .as_i64()
                .map(|x| BigRational::from_integer(BigInt::from(x)))
                .ok_or_else(|| parse_err("non-integer JSON number; use \"p/q\" strings")),
            _ => Err(parse_err("cochain value must be a string or integer")),
        })
        .collect::<Result<Vec<_>>>()?;
    if integral && values.iter().any(|q| !q.is_integer()) {
        return Err(parse_err("INT cochain with non-integer entry"));
    }
    Ok((Cochain::new(degree as usize, values), integral))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::sphere;
    use crate::scalar::rat;

    #[test]
    fn triangle_circle_document() {
        let k = load_complex(r#"{"dimension": 1, "vertices": 3, "simplices": {"1": [[0,1],[1,2],[0,2]]}}"#, false)
            .unwrap();
        assert_eq!(k.dimension(), 1);
        assert_eq!(k.count(1), 3);
    }

    #[test]
    fn fundamental_cycle_is_validated() {
        let bad = r#"{"vertices": 3, "simplices": {"1": [[0,1],[1,2],[0,2]]},
            "fundamental_cycle": [{"simplex": [0,1], "coeff": 1}, {"simplex": [1,2], "coeff": 1}, {"simplex": [0,2], "coeff": 1}]}"#;
        assert_eq!(load_complex(bad, false).unwrap_err(), Error::NotACycleFundamental);
        let good = bad.replace(r#"[0,2], "coeff": 1"#, r#"[0,2], "coeff": -1"#);
        assert!(load_complex(&good, false).unwrap().is_oriented());
    }

    #[test]
    fn missing_face_needs_auto_close() {
        let doc = r#"{"vertices": 3, "simplices": {"1": [[0,1],[1,2]], "2": [[0,1,2]]}}"#;
        assert!(matches!(load_complex(doc, false), Err(Error::ClosureViolated { .. })));
        assert_eq!(load_complex(doc, true).unwrap().count(1), 3);
    }

    #[test]
    fn roundtrip() {
        let s = sphere(2);
        let back = complex_from_json(&complex_to_json(&s), false).unwrap();
        assert_eq!(back, s);
        let u = Cochain::new(1, vec![rat(1, 2), rat(-3, 1)]);
        let (v, int) = cochain_from_json(&cochain_to_json(&u, false)).unwrap();
        assert_eq!(v, u);
        assert!(!int);
    }
}
