//! Tensor products of the supported ring pairs.
//!
//! The table is deliberately small: it covers exactly the pairs the star
//! product needs. Anything else reports an unsupported-pair error.

use num_integer::Integer;

use super::{Elem, Ring};
use crate::error::{Error, Result};

/// Target ring of `R (x) S` for supported pairs:
///
/// * `(Integers, S)      -> S`
/// * `(Modular a, Modular b) -> Modular gcd(a,b)`
/// * `(CommPoly X/Z, CommPoly Y/Z)` with disjoint variables `-> CommPoly (X u Y)/Z`
/// * `(Modular a, CommPoly Y/Z) -> CommPoly Y/Modular a`
pub fn tensor_ring(r: &Ring, s: &Ring) -> Result<Ring> {
    match (r, s) {
        (Ring::Integers, _) => Ok(s.clone()),
        (Ring::Modular(a), Ring::Modular(b)) => {
            let g = a.gcd(b);
            if g < 2 {
                // gcd 1 would be the zero ring, which we do not model
                return Err(Error::UnsupportedTensor(format!("{r:?}"), format!("{s:?}")));
            }
            Ok(Ring::Modular(g))
        }
        (
            Ring::CommPoly { vars: x, base: bx },
            Ring::CommPoly { vars: y, base: by },
        ) if **bx == Ring::Integers && **by == Ring::Integers => {
            if x.iter().any(|v| y.contains(v)) {
                return Err(Error::UnsupportedTensor(format!("{r:?}"), format!("{s:?}")));
            }
            let mut vars: Vec<String> = x.iter().chain(y.iter()).cloned().collect();
            vars.sort();
            Ok(Ring::CommPoly { vars, base: Box::new(Ring::Integers) })
        }
        (Ring::Modular(a), Ring::CommPoly { vars, base }) if **base == Ring::Integers => {
            Ok(Ring::CommPoly { vars: vars.clone(), base: Box::new(Ring::Modular(*a)) })
        }
        _ => Err(Error::UnsupportedTensor(format!("{r:?}"), format!("{s:?}"))),
    }
}

/// The bilinear embedding `(x, y) -> x (x) y` realized in the target ring.
pub fn tensor_embed(r: &Ring, s: &Ring, x: &Elem, y: &Elem) -> Result<Elem> {
    let target = tensor_ring(r, s)?;
    match (r, s) {
        (Ring::Integers, _) => match x {
            Elem::Int(n) => Ok(target.int_scale(n, y)),
            _ => Err(Error::Parse("integer element expected".into())),
        },
        (Ring::Modular(_), Ring::Modular(_)) => match (x, y) {
            (Elem::Int(a), Elem::Int(b)) => {
                Ok(target.int_scale(a, &target.from_int(b)))
            }
            _ => Err(Error::Parse("modular elements expected".into())),
        },
        (Ring::CommPoly { vars: vx, .. }, Ring::CommPoly { vars: vy, .. }) => {
            let (px, py) = match (x, y) {
                (Elem::Poly(px), Elem::Poly(py)) => (px, py),
                _ => return Err(Error::Parse("polynomial elements expected".into())),
            };
            // positions of the original variables inside the merged sorted list
            let tvars = match &target {
                Ring::CommPoly { vars, .. } => vars.clone(),
                _ => unreachable!(),
            };
            let posx: Vec<usize> =
                vx.iter().map(|v| tvars.iter().position(|t| t == v).unwrap()).collect();
            let posy: Vec<usize> =
                vy.iter().map(|v| tvars.iter().position(|t| t == v).unwrap()).collect();
            let mut out = target.zero();
            for (ex, cx) in px {
                for (ey, cy) in py {
                    let mut e = vec![0u32; tvars.len()];
                    for (i, &p) in posx.iter().enumerate() {
                        e[p] += ex[i];
                    }
                    for (i, &p) in posy.iter().enumerate() {
                        e[p] += ey[i];
                    }
                    let mut term = std::collections::BTreeMap::new();
                    term.insert(e, cx * cy);
                    out = target.add(&out, &Elem::Poly(term));
                }
            }
            Ok(out)
        }
        (Ring::Modular(_), Ring::CommPoly { .. }) => match x {
            Elem::Int(a) => Ok(target.int_scale(a, y)),
            _ => Err(Error::Parse("modular element expected".into())),
        },
        _ => Err(Error::UnsupportedTensor(format!("{r:?}"), format!("{s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn integers_tensor_anything_is_identity() {
        let s = Ring::Modular(4);
        assert_eq!(tensor_ring(&Ring::Integers, &s).unwrap(), s);
        let e = tensor_embed(&Ring::Integers, &s, &Elem::Int(BigInt::from(3)), &Elem::Int(BigInt::from(3)))
            .unwrap();
        assert_eq!(e, Elem::Int(BigInt::from(1))); // 9 mod 4
    }

    #[test]
    fn modular_pair_collapses_to_gcd() {
        // Z/6 (x) Z/4 = Z/2, the gcd of the two cyclic groups
        assert_eq!(tensor_ring(&Ring::Modular(6), &Ring::Modular(4)).unwrap(), Ring::Modular(2));
        assert!(tensor_ring(&Ring::Modular(3), &Ring::Modular(4)).is_err());
    }

    #[test]
    fn polynomial_variables_merge_disjointly() {
        let px = Ring::CommPoly { vars: vec!["x".into()], base: Box::new(Ring::Integers) };
        let py = Ring::CommPoly { vars: vec!["y".into()], base: Box::new(Ring::Integers) };
        let t = tensor_ring(&px, &py).unwrap();
        assert_eq!(
            t,
            Ring::CommPoly { vars: vec!["x".into(), "y".into()], base: Box::new(Ring::Integers) }
        );
        assert!(tensor_ring(&px, &px).is_err());
    }

    #[test]
    fn unsupported_pairs_error() {
        let free = Ring::FreeAssoc { gens: vec!["a".into()], max_len: 2 };
        assert!(matches!(
            tensor_ring(&free, &Ring::Integers),
            Err(crate::error::Error::UnsupportedTensor(_, _))
        ));
    }
}
