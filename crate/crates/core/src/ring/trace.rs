//! The trace-class quotient R/[R,R].
//!
//! Every ring kind comes with a computable canonical form for classes
//! modulo additive commutators: commutative rings are their own quotient,
//! matrix rings reduce through the trace, the free ring replaces every
//! word by its lexicographically minimal rotation (a necklace), and
//! products split componentwise.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{add_term, Elem, Ring};

/// A canonical representative of an element of R/[R,R]. Two trace
/// classes are equal exactly when their fields are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceClass {
    /// The ring whose elements carry the canonical forms. For matrix
    /// rings this is the innermost non-matrix base.
    pub carrier: Ring,
    pub value: Elem,
}

impl TraceClass {
    pub fn is_zero(&self) -> bool {
        self.carrier.is_zero(&self.value)
    }

    pub fn add(&self, other: &TraceClass) -> TraceClass {
        debug_assert_eq!(self.carrier, other.carrier);
        let sum = self.carrier.add(&self.value, &other.value);
        TraceClass { carrier: self.carrier.clone(), value: canonicalize(&self.carrier, sum) }
    }

    pub fn int_scale(&self, n: &BigInt) -> TraceClass {
        let v = self.carrier.int_scale(n, &self.value);
        TraceClass { carrier: self.carrier.clone(), value: canonicalize(&self.carrier, v) }
    }

    pub fn zero(carrier: &Ring) -> TraceClass {
        TraceClass { carrier: carrier.clone(), value: carrier.zero() }
    }
}

/// The ring whose elements serve as canonical trace-class values.
pub fn carrier_ring(ring: &Ring) -> Ring {
    match ring {
        Ring::Matrix(_, base) => carrier_ring(base),
        Ring::Product(l, r) => {
            Ring::Product(Box::new(carrier_ring(l)), Box::new(carrier_ring(r)))
        }
        other => other.clone(),
    }
}

/// Canonical image of a ring element in R/[R,R].
pub fn trace_class(ring: &Ring, a: &Elem) -> TraceClass {
    match ring {
        Ring::Integers | Ring::Modular(_) | Ring::CommPoly { .. } => {
            TraceClass { carrier: ring.clone(), value: a.clone() }
        }
        Ring::FreeAssoc { .. } => TraceClass {
            carrier: ring.clone(),
            value: canonicalize(ring, a.clone()),
        },
        Ring::Matrix(_, base) => {
            let t = ring.matrix_trace(a).expect("matrix ring");
            trace_class(base, &t)
        }
        Ring::Product(l, r) => match a {
            Elem::Pair(x, y) => {
                let tl = trace_class(l, x);
                let tr = trace_class(r, y);
                TraceClass {
                    carrier: Ring::Product(Box::new(tl.carrier), Box::new(tr.carrier)),
                    value: Elem::Pair(Box::new(tl.value), Box::new(tr.value)),
                }
            }
            _ => panic!("element shape does not match ring {ring:?}"),
        },
    }
}

/// Re-canonicalizes a carrier value. Only free-ring values need work:
/// every word becomes its minimal rotation. Rotations that would cross
/// the truncation boundary never arise because such words are already
/// zero in the ring.
fn canonicalize(carrier: &Ring, v: Elem) -> Elem {
    match (carrier, v) {
        (Ring::FreeAssoc { .. }, Elem::Free(terms)) => {
            let mut out: BTreeMap<Vec<u8>, BigInt> = BTreeMap::new();
            for (w, c) in terms {
                add_term(&mut out, min_rotation(&w), c, &Ring::Integers);
            }
            Elem::Free(out)
        }
        (Ring::Product(l, r), Elem::Pair(x, y)) => Elem::Pair(
            Box::new(canonicalize(l, *x)),
            Box::new(canonicalize(r, *y)),
        ),
        (_, v) => v,
    }
}

/// Lexicographically minimal rotation of a word.
fn min_rotation(w: &[u8]) -> Vec<u8> {
    if w.len() <= 1 {
        return w.to_vec();
    }
    let mut best = w.to_vec();
    for i in 1..w.len() {
        let mut rot = Vec::with_capacity(w.len());
        rot.extend_from_slice(&w[i..]);
        rot.extend_from_slice(&w[..i]);
        if rot < best {
            best = rot;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::sample_elem;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn free_ring() -> Ring {
        Ring::FreeAssoc { gens: vec!["a".into(), "b".into(), "c".into()], max_len: 6 }
    }

    #[test]
    fn integers_are_their_own_quotient() {
        let tc = trace_class(&Ring::Integers, &Elem::Int(BigInt::from(5)));
        assert_eq!(tc.value, Elem::Int(BigInt::from(5)));
    }

    #[test]
    fn matrix_trace_class_is_the_trace() {
        let ring = Ring::Matrix(2, Box::new(Ring::Integers));
        let f = Elem::Matrix(vec![
            Elem::Int(BigInt::from(1)),
            Elem::Int(BigInt::from(2)),
            Elem::Int(BigInt::from(3)),
            Elem::Int(BigInt::from(4)),
        ]);
        let tc = trace_class(&ring, &f);
        assert_eq!(tc.carrier, Ring::Integers);
        assert_eq!(tc.value, Elem::Int(BigInt::from(5)));
    }

    #[test]
    fn commutator_vanishes_and_words_rotate() {
        let r = free_ring();
        let a = r.free_gen_named("a").unwrap();
        let b = r.free_gen_named("b").unwrap();
        let c = r.free_gen_named("c").unwrap();
        let comm = r.sub(&r.mul(&a, &b), &r.mul(&b, &a));
        assert!(trace_class(&r, &comm).is_zero());

        let bca = r.mul(&r.mul(&b, &c), &a);
        let abc = r.mul(&r.mul(&a, &b), &c);
        assert_eq!(trace_class(&r, &bca), trace_class(&r, &abc));
    }

    #[test]
    fn trace_class_of_commutators_vanishes_randomly() {
        let rings = vec![
            Ring::Integers,
            Ring::Modular(6),
            Ring::Matrix(2, Box::new(Ring::Integers)),
            free_ring(),
            Ring::Product(Box::new(Ring::Modular(4)), Box::new(Ring::Integers)),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ring in rings {
            for _ in 0..1000 {
                let r = sample_elem(&ring, &mut rng);
                let s = sample_elem(&ring, &mut rng);
                let comm = ring.sub(&ring.mul(&r, &s), &ring.mul(&s, &r));
                assert!(trace_class(&ring, &comm).is_zero());
            }
        }
    }

    #[test]
    fn free_trace_class_is_rotation_invariant() {
        let r = free_ring();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let len = rng.gen_range(1..=6usize);
            let word: Vec<u8> = (0..len).map(|_| rng.gen_range(0..3u8)).collect();
            let mut m = BTreeMap::new();
            m.insert(word.clone(), BigInt::from(1));
            let e = Elem::Free(m);
            let base = trace_class(&r, &e);
            for i in 1..len {
                let mut rot = word[i..].to_vec();
                rot.extend_from_slice(&word[..i]);
                let mut m2 = BTreeMap::new();
                m2.insert(rot, BigInt::from(1));
                assert_eq!(trace_class(&r, &Elem::Free(m2)), base);
            }
        }
    }

    #[test]
    fn trace_of_ab_equals_trace_of_ba_for_matrices() {
        let ring = Ring::Matrix(3, Box::new(Ring::Integers));
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let a = sample_elem(&ring, &mut rng);
            let b = sample_elem(&ring, &mut rng);
            assert_eq!(
                trace_class(&ring, &ring.mul(&a, &b)),
                trace_class(&ring, &ring.mul(&b, &a))
            );
        }
    }
}
