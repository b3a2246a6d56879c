//! JSON encoding of ring descriptors and elements.
//!
//! Descriptors are `{"kind": ..., "params": {...}}` objects. Element
//! encoding depends on the ring kind: integers and modular residues are
//! decimal strings, matrices are row-major nested arrays, free-ring
//! elements are lists of `{coeff, word}`, polynomials are lists of
//! `{coeff, exponents}`, and product elements are two-element arrays.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use super::{add_term, Elem, Ring};
use crate::error::{Error, Result};

pub fn ring_to_json(ring: &Ring) -> Value {
    match ring {
        Ring::Integers => json!({"kind": "Integers", "params": {}}),
        Ring::Modular(m) => json!({"kind": "Modular", "params": {"m": m}}),
        Ring::Matrix(k, base) => {
            json!({"kind": "Matrix", "params": {"k": k, "base": ring_to_json(base)}})
        }
        Ring::FreeAssoc { gens, max_len } => json!({
            "kind": "FreeAssoc",
            "params": {"generators": gens, "maxWordLen": max_len}
        }),
        Ring::CommPoly { vars, base } => json!({
            "kind": "CommPoly",
            "params": {"variables": vars, "base": ring_to_json(base)}
        }),
        Ring::Product(l, r) => json!({
            "kind": "Product",
            "params": {"left": ring_to_json(l), "right": ring_to_json(r)}
        }),
    }
}

pub fn ring_from_json(v: &Value) -> Result<Ring> {
    let obj = v.as_object().ok_or_else(|| parse("ring descriptor must be an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| parse("ring descriptor needs a string `kind`"))?;
    let empty = Map::new();
    let params = obj.get("params").and_then(Value::as_object).unwrap_or(&empty);
    let ring = match kind {
        "Integers" => Ring::Integers,
        "Modular" => {
            let m = params
                .get("m")
                .and_then(Value::as_u64)
                .ok_or_else(|| parse("Modular needs integer parameter `m`"))?;
            Ring::Modular(m)
        }
        "Matrix" => {
            let k = params
                .get("k")
                .and_then(Value::as_u64)
                .ok_or_else(|| parse("Matrix needs integer parameter `k`"))?;
            let base = params.get("base").ok_or_else(|| parse("Matrix needs `base`"))?;
            Ring::Matrix(k as usize, Box::new(ring_from_json(base)?))
        }
        "FreeAssoc" => {
            let gens = string_list(params.get("generators"), "generators")?;
            let max_len = params
                .get("maxWordLen")
                .and_then(Value::as_u64)
                .ok_or_else(|| parse("FreeAssoc needs integer `maxWordLen`"))?;
            Ring::FreeAssoc { gens, max_len: max_len as usize }
        }
        "CommPoly" => {
            let mut vars = string_list(params.get("variables"), "variables")?;
            vars.sort();
            let base = params.get("base").ok_or_else(|| parse("CommPoly needs `base`"))?;
            Ring::CommPoly { vars, base: Box::new(ring_from_json(base)?) }
        }
        "Product" => {
            let l = params.get("left").ok_or_else(|| parse("Product needs `left`"))?;
            let r = params.get("right").ok_or_else(|| parse("Product needs `right`"))?;
            Ring::Product(Box::new(ring_from_json(l)?), Box::new(ring_from_json(r)?))
        }
        other => return Err(parse(&format!("unknown ring kind `{other}`"))),
    };
    ring.clone().make().map_err(|e| parse(&e.to_string()))?;
    Ok(ring)
}

pub fn elem_to_json(ring: &Ring, a: &Elem) -> Value {
    match (ring, a) {
        (Ring::Integers | Ring::Modular(_), Elem::Int(n)) => Value::String(n.to_string()),
        (Ring::Matrix(k, base), Elem::Matrix(m)) => {
            let rows: Vec<Value> = (0..*k)
                .map(|i| {
                    Value::Array((0..*k).map(|j| elem_to_json(base, &m[i * k + j])).collect())
                })
                .collect();
            Value::Array(rows)
        }
        (Ring::FreeAssoc { gens, .. }, Elem::Free(terms)) => Value::Array(
            terms
                .iter()
                .map(|(w, c)| {
                    let word: Vec<Value> = w
                        .iter()
                        .map(|&g| Value::String(gens[g as usize].clone()))
                        .collect();
                    json!({"coeff": c.to_string(), "word": word})
                })
                .collect(),
        ),
        (Ring::CommPoly { .. }, Elem::Poly(terms)) => Value::Array(
            terms
                .iter()
                .map(|(e, c)| json!({"coeff": c.to_string(), "exponents": e}))
                .collect(),
        ),
        (Ring::Product(l, r), Elem::Pair(x, y)) => {
            Value::Array(vec![elem_to_json(l, x), elem_to_json(r, y)])
        }
        _ => panic!("element shape does not match ring {ring:?}"),
    }
}

pub fn elem_from_json(ring: &Ring, v: &Value) -> Result<Elem> {
    let elem = match ring {
        Ring::Integers | Ring::Modular(_) => ring.from_int(&parse_bigint(v)?),
        Ring::Matrix(k, base) => {
            let rows = v.as_array().ok_or_else(|| parse("matrix must be a nested array"))?;
            if rows.len() != *k {
                return Err(parse(&format!("matrix needs {k} rows")));
            }
            let mut out = Vec::with_capacity(k * k);
            for row in rows {
                let cells = row.as_array().ok_or_else(|| parse("matrix row must be an array"))?;
                if cells.len() != *k {
                    return Err(parse(&format!("matrix row needs {k} entries")));
                }
                for cell in cells {
                    out.push(elem_from_json(base, cell)?);
                }
            }
            Elem::Matrix(out)
        }
        Ring::FreeAssoc { gens, max_len } => {
            let terms = v.as_array().ok_or_else(|| parse("free element must be a list"))?;
            let mut out = std::collections::BTreeMap::new();
            for t in terms {
                let obj = t.as_object().ok_or_else(|| parse("free term must be an object"))?;
                let c = parse_bigint(obj.get("coeff").unwrap_or(&Value::Null))?;
                let word_v = obj
                    .get("word")
                    .and_then(Value::as_array)
                    .ok_or_else(|| parse("free term needs a `word` list"))?;
                let mut word = Vec::with_capacity(word_v.len());
                for s in word_v {
                    let name = s.as_str().ok_or_else(|| parse("word letters must be strings"))?;
                    let i = gens
                        .iter()
                        .position(|g| g == name)
                        .ok_or_else(|| parse(&format!("unknown generator `{name}`")))?;
                    word.push(i as u8);
                }
                if word.len() > *max_len {
                    continue; // already zero in the truncated ring
                }
                add_term(&mut out, word, c, &Ring::Integers);
            }
            Elem::Free(out)
        }
        Ring::CommPoly { vars, base } => {
            let terms = v.as_array().ok_or_else(|| parse("polynomial must be a list"))?;
            let mut out = std::collections::BTreeMap::new();
            for t in terms {
                let obj = t.as_object().ok_or_else(|| parse("poly term must be an object"))?;
                let c = parse_bigint(obj.get("coeff").unwrap_or(&Value::Null))?;
                let exp_v = obj
                    .get("exponents")
                    .and_then(Value::as_array)
                    .ok_or_else(|| parse("poly term needs an `exponents` list"))?;
                if exp_v.len() != vars.len() {
                    return Err(parse(&format!("expected {} exponents", vars.len())));
                }
                let mut exps = Vec::with_capacity(exp_v.len());
                for e in exp_v {
                    let n = e.as_u64().ok_or_else(|| parse("exponents must be integers"))?;
                    exps.push(n as u32);
                }
                add_term(&mut out, exps, c, base);
            }
            Elem::Poly(out)
        }
        Ring::Product(l, r) => {
            let pair = v.as_array().ok_or_else(|| parse("product element must be a pair"))?;
            if pair.len() != 2 {
                return Err(parse("product element must have exactly two entries"));
            }
            Elem::Pair(
                Box::new(elem_from_json(l, &pair[0])?),
                Box::new(elem_from_json(r, &pair[1])?),
            )
        }
    };
    ring.check_elem(&elem)?;
    Ok(elem)
}

/// Accepts decimal strings (canonical) and bare JSON integers.
pub(crate) fn parse_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| parse(&format!("not a decimal integer: `{s}`"))),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else {
                Err(parse(&format!("not an integer: {n}")))
            }
        }
        _ => Err(parse("expected an integer (decimal string)")),
    }
}

fn string_list(v: Option<&Value>, what: &str) -> Result<Vec<String>> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| parse(&format!("`{what}` must be a list of strings")))?;
    arr.iter()
        .map(|s| {
            s.as_str()
                .map(str::to_owned)
                .ok_or_else(|| parse(&format!("`{what}` must contain strings")))
        })
        .collect()
}

fn parse(msg: &str) -> Error {
    Error::Parse(msg.to_string())
}
