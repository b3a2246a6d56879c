//! Seeded random elements and exhaustive enumeration of finite rings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::Rng;

use super::{add_term, Elem, Ring};
use crate::error::{Error, Result};

/// Draws a small random element, suitable for property checks. Integer
/// entries stay in [-5, 5]; free-ring and polynomial samples have at most
/// two short terms so that powers remain cheap to compute exactly.
pub fn sample_elem<R: Rng>(ring: &Ring, rng: &mut R) -> Elem {
    match ring {
        Ring::Integers => Elem::Int(BigInt::from(rng.gen_range(-5i64..=5))),
        Ring::Modular(m) => Elem::Int(BigInt::from(rng.gen_range(0..*m))),
        Ring::Matrix(k, base) => {
            Elem::Matrix((0..k * k).map(|_| sample_elem(base, rng)).collect())
        }
        Ring::FreeAssoc { gens, max_len } => {
            let mut out = BTreeMap::new();
            for _ in 0..rng.gen_range(1..=2) {
                let len = rng.gen_range(0..=2usize.min(*max_len));
                let word: Vec<u8> =
                    (0..len).map(|_| rng.gen_range(0..gens.len() as u8)).collect();
                let c = BigInt::from(rng.gen_range(-3i64..=3));
                add_term(&mut out, word, c, &Ring::Integers);
            }
            Elem::Free(out)
        }
        Ring::CommPoly { vars, base } => {
            let mut out = BTreeMap::new();
            for _ in 0..rng.gen_range(1..=2) {
                let mut exps = vec![0u32; vars.len()];
                for _ in 0..rng.gen_range(0..=2) {
                    let i = rng.gen_range(0..vars.len());
                    exps[i] += 1;
                }
                let c = BigInt::from(rng.gen_range(-3i64..=3));
                add_term(&mut out, exps, c, base);
            }
            Elem::Poly(out)
        }
        Ring::Product(l, r) => Elem::Pair(
            Box::new(sample_elem(l, rng)),
            Box::new(sample_elem(r, rng)),
        ),
    }
}

/// Lists every element of a finite ring. Errors on infinite rings; the
/// caller is responsible for size guards.
pub fn enumerate_elems(ring: &Ring) -> Result<Vec<Elem>> {
    match ring {
        Ring::Modular(m) => Ok((0..*m).map(|i| Elem::Int(BigInt::from(i))).collect()),
        Ring::Matrix(k, base) => {
            let cells = enumerate_elems(base)?;
            let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
            for _ in 0..k * k {
                let mut next = Vec::with_capacity(out.len() * cells.len());
                for partial in &out {
                    for c in &cells {
                        let mut row = partial.clone();
                        row.push(c.clone());
                        next.push(row);
                    }
                }
                out = next;
            }
            Ok(out.into_iter().map(Elem::Matrix).collect())
        }
        Ring::Product(l, r) => {
            let ls = enumerate_elems(l)?;
            let rs = enumerate_elems(r)?;
            let mut out = Vec::with_capacity(ls.len() * rs.len());
            for a in &ls {
                for b in &rs {
                    out.push(Elem::Pair(Box::new(a.clone()), Box::new(b.clone())));
                }
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported(format!("cannot enumerate infinite ring {ring:?}"))),
    }
}
