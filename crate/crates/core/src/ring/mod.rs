//! Pluggable exact rings.
//!
//! A [`Ring`] value is a runtime descriptor (integers, modular integers,
//! square matrices, a truncated free associative ring, commutative
//! polynomials, or a binary product) together with the arithmetic on its
//! elements. Elements are [`Elem`] trees kept in canonical form at all
//! times, so structural equality decides ring equality.

mod json;
mod sample;
mod tensor;
mod trace;

pub use json::{elem_from_json, elem_to_json, ring_from_json, ring_to_json};
pub(crate) use json::parse_bigint;
pub use sample::{enumerate_elems, sample_elem};
pub use tensor::{tensor_embed, tensor_ring};
pub use trace::{carrier_ring, trace_class, TraceClass};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Ring descriptor. Construct through [`Ring::make`] so parameters are
/// validated once; all arithmetic assumes a valid descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    /// Arbitrary-precision integers.
    Integers,
    /// Integers modulo `m`, `m >= 2`.
    Modular(u64),
    /// `k x k` matrices over a base ring, `k >= 1`.
    Matrix(usize, Box<Ring>),
    /// Free associative ring over the given generators, truncated so that
    /// every word longer than `max_len` is zero.
    FreeAssoc { gens: Vec<String>, max_len: usize },
    /// Commutative polynomials in the given variables over `Integers` or
    /// `Modular`. Variables are kept sorted.
    CommPoly { vars: Vec<String>, base: Box<Ring> },
    /// Componentwise product of two rings.
    Product(Box<Ring>, Box<Ring>),
}

/// A ring element. The variant in use depends on the ring kind:
/// `Int` for `Integers`/`Modular`, `Matrix` (row-major, length k²) for
/// matrix rings, `Free` (word -> coefficient) for the free ring, `Poly`
/// (exponent vector -> coefficient) for polynomials, `Pair` for products.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Int(BigInt),
    Matrix(Vec<Elem>),
    Free(BTreeMap<Vec<u8>, BigInt>),
    Poly(BTreeMap<Vec<u32>, BigInt>),
    Pair(Box<Elem>, Box<Elem>),
}

impl Ring {
    /// Validates the descriptor and returns it as a usable ring.
    pub fn make(self) -> Result<Ring> {
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        match self {
            Ring::Integers => Ok(()),
            Ring::Modular(m) => {
                if *m < 2 {
                    return Err(Error::Config(format!("modulus must be >= 2, got {m}")));
                }
                Ok(())
            }
            Ring::Matrix(k, base) => {
                if *k < 1 {
                    return Err(Error::Config("matrix size must be >= 1".into()));
                }
                base.validate()
            }
            Ring::FreeAssoc { gens, max_len } => {
                if *max_len < 1 {
                    return Err(Error::Config("word length bound must be >= 1".into()));
                }
                if gens.is_empty() || gens.len() > 255 {
                    return Err(Error::Config(format!(
                        "free ring needs between 1 and 255 generators, got {}",
                        gens.len()
                    )));
                }
                let mut sorted = gens.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != gens.len() {
                    return Err(Error::Config("free ring generators must be distinct".into()));
                }
                Ok(())
            }
            Ring::CommPoly { vars, base } => {
                if vars.is_empty() {
                    return Err(Error::Config("polynomial ring needs at least one variable".into()));
                }
                let mut sorted = vars.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != vars.len() || &sorted != vars {
                    return Err(Error::Config(
                        "polynomial variables must be distinct and sorted".into(),
                    ));
                }
                match base.as_ref() {
                    Ring::Integers | Ring::Modular(_) => base.validate(),
                    _ => Err(Error::Config(
                        "polynomial base ring must be Integers or Modular".into(),
                    )),
                }
            }
            Ring::Product(l, r) => {
                l.validate()?;
                r.validate()
            }
        }
    }

    /// True when multiplication commutes for every pair of elements.
    pub fn is_commutative(&self) -> bool {
        match self {
            Ring::Integers | Ring::Modular(_) | Ring::CommPoly { .. } => true,
            Ring::Matrix(k, base) => *k == 1 && base.is_commutative(),
            Ring::FreeAssoc { gens, .. } => gens.len() <= 1,
            Ring::Product(l, r) => l.is_commutative() && r.is_commutative(),
        }
    }

    /// True when the ring has finitely many elements.
    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    /// Number of elements of a finite ring, `None` when infinite or
    /// beyond `u128`.
    pub fn size(&self) -> Option<u128> {
        match self {
            Ring::Integers | Ring::FreeAssoc { .. } | Ring::CommPoly { .. } => None,
            Ring::Modular(m) => Some(*m as u128),
            Ring::Matrix(k, base) => {
                let b = base.size()?;
                let mut acc: u128 = 1;
                for _ in 0..k * k {
                    acc = acc.checked_mul(b)?;
                }
                Some(acc)
            }
            Ring::Product(l, r) => l.size()?.checked_mul(r.size()?),
        }
    }

    /// True when the trace-class group R/[R,R] has no additive torsion,
    /// which is what makes ghost comparison a complete equality test.
    pub fn tq_torsion_free(&self) -> bool {
        match self {
            Ring::Integers | Ring::FreeAssoc { .. } => true,
            Ring::Modular(_) => false,
            Ring::Matrix(_, base) => base.tq_torsion_free(),
            Ring::CommPoly { base, .. } => base.tq_torsion_free(),
            Ring::Product(l, r) => l.tq_torsion_free() && r.tq_torsion_free(),
        }
    }

    pub fn zero(&self) -> Elem {
        match self {
            Ring::Integers | Ring::Modular(_) => Elem::Int(BigInt::zero()),
            Ring::Matrix(k, base) => Elem::Matrix(vec![base.zero(); k * k]),
            Ring::FreeAssoc { .. } => Elem::Free(BTreeMap::new()),
            Ring::CommPoly { .. } => Elem::Poly(BTreeMap::new()),
            Ring::Product(l, r) => Elem::Pair(Box::new(l.zero()), Box::new(r.zero())),
        }
    }

    pub fn one(&self) -> Elem {
        match self {
            Ring::Integers | Ring::Modular(_) => Elem::Int(BigInt::one()),
            Ring::Matrix(k, base) => {
                let mut m = vec![base.zero(); k * k];
                for i in 0..*k {
                    m[i * k + i] = base.one();
                }
                Elem::Matrix(m)
            }
            Ring::FreeAssoc { .. } => {
                let mut m = BTreeMap::new();
                m.insert(Vec::new(), BigInt::one());
                Elem::Free(m)
            }
            Ring::CommPoly { vars, .. } => {
                let mut m = BTreeMap::new();
                m.insert(vec![0u32; vars.len()], BigInt::one());
                Elem::Poly(m)
            }
            Ring::Product(l, r) => Elem::Pair(Box::new(l.one()), Box::new(r.one())),
        }
    }

    /// Image of an integer under the unique map from Z.
    pub fn from_int(&self, n: &BigInt) -> Elem {
        self.int_scale(n, &self.one())
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        *a == self.zero()
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    fn reduce_int(&self, n: BigInt) -> BigInt {
        match self {
            Ring::Modular(m) => n.mod_floor(&BigInt::from(*m)),
            _ => n,
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Ring::Integers | Ring::Modular(_), Elem::Int(x), Elem::Int(y)) => {
                Elem::Int(self.reduce_int(x + y))
            }
            (Ring::Matrix(_, base), Elem::Matrix(x), Elem::Matrix(y)) => Elem::Matrix(
                x.iter().zip(y.iter()).map(|(u, v)| base.add(u, v)).collect(),
            ),
            (Ring::FreeAssoc { .. }, Elem::Free(x), Elem::Free(y)) => {
                let mut out = x.clone();
                for (w, c) in y {
                    add_term(&mut out, w.clone(), c.clone(), &Ring::Integers);
                }
                Elem::Free(out)
            }
            (Ring::CommPoly { base, .. }, Elem::Poly(x), Elem::Poly(y)) => {
                let mut out = x.clone();
                for (e, c) in y {
                    add_term(&mut out, e.clone(), c.clone(), base);
                }
                Elem::Poly(out)
            }
            (Ring::Product(l, r), Elem::Pair(a1, a2), Elem::Pair(b1, b2)) => {
                Elem::Pair(Box::new(l.add(a1, b1)), Box::new(r.add(a2, b2)))
            }
            _ => panic!("element shape does not match ring {self:?}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self, a) {
            (Ring::Integers | Ring::Modular(_), Elem::Int(x)) => Elem::Int(self.reduce_int(-x)),
            (Ring::Matrix(_, base), Elem::Matrix(x)) => {
                Elem::Matrix(x.iter().map(|u| base.neg(u)).collect())
            }
            (Ring::FreeAssoc { .. }, Elem::Free(x)) => {
                Elem::Free(x.iter().map(|(w, c)| (w.clone(), -c)).collect())
            }
            (Ring::CommPoly { base, .. }, Elem::Poly(x)) => Elem::Poly(
                x.iter()
                    .map(|(e, c)| (e.clone(), base.reduce_int(-c)))
                    .collect(),
            ),
            (Ring::Product(l, r), Elem::Pair(a1, a2)) => {
                Elem::Pair(Box::new(l.neg(a1)), Box::new(r.neg(a2)))
            }
            _ => panic!("element shape does not match ring {self:?}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Ring::Integers | Ring::Modular(_), Elem::Int(x), Elem::Int(y)) => {
                Elem::Int(self.reduce_int(x * y))
            }
            (Ring::Matrix(k, base), Elem::Matrix(x), Elem::Matrix(y)) => {
                let k = *k;
                let mut out = vec![base.zero(); k * k];
                for i in 0..k {
                    for l in 0..k {
                        let xil = &x[i * k + l];
                        if base.is_zero(xil) {
                            continue;
                        }
                        for j in 0..k {
                            let p = base.mul(xil, &y[l * k + j]);
                            out[i * k + j] = base.add(&out[i * k + j], &p);
                        }
                    }
                }
                Elem::Matrix(out)
            }
            (Ring::FreeAssoc { max_len, .. }, Elem::Free(x), Elem::Free(y)) => {
                let mut out = BTreeMap::new();
                for (w1, c1) in x {
                    for (w2, c2) in y {
                        if w1.len() + w2.len() > *max_len {
                            continue; // truncation ideal
                        }
                        let mut w = w1.clone();
                        w.extend_from_slice(w2);
                        add_term(&mut out, w, c1 * c2, &Ring::Integers);
                    }
                }
                Elem::Free(out)
            }
            (Ring::CommPoly { base, .. }, Elem::Poly(x), Elem::Poly(y)) => {
                let mut out = BTreeMap::new();
                for (e1, c1) in x {
                    for (e2, c2) in y {
                        let e: Vec<u32> =
                            e1.iter().zip(e2.iter()).map(|(u, v)| u + v).collect();
                        add_term(&mut out, e, c1 * c2, base);
                    }
                }
                Elem::Poly(out)
            }
            (Ring::Product(l, r), Elem::Pair(a1, a2), Elem::Pair(b1, b2)) => {
                Elem::Pair(Box::new(l.mul(a1, b1)), Box::new(r.mul(a2, b2)))
            }
            _ => panic!("element shape does not match ring {self:?}"),
        }
    }

    /// `n * a` as iterated addition, computed directly.
    pub fn int_scale(&self, n: &BigInt, a: &Elem) -> Elem {
        match (self, a) {
            (Ring::Integers | Ring::Modular(_), Elem::Int(x)) => Elem::Int(self.reduce_int(n * x)),
            (Ring::Matrix(_, base), Elem::Matrix(x)) => {
                Elem::Matrix(x.iter().map(|u| base.int_scale(n, u)).collect())
            }
            (Ring::FreeAssoc { .. }, Elem::Free(x)) => {
                let mut out = BTreeMap::new();
                for (w, c) in x {
                    add_term(&mut out, w.clone(), n * c, &Ring::Integers);
                }
                Elem::Free(out)
            }
            (Ring::CommPoly { base, .. }, Elem::Poly(x)) => {
                let mut out = BTreeMap::new();
                for (e, c) in x {
                    add_term(&mut out, e.clone(), n * c, base);
                }
                Elem::Poly(out)
            }
            (Ring::Product(l, r), Elem::Pair(a1, a2)) => {
                Elem::Pair(Box::new(l.int_scale(n, a1)), Box::new(r.int_scale(n, a2)))
            }
            _ => panic!("element shape does not match ring {self:?}"),
        }
    }

    pub fn pow(&self, a: &Elem, n: usize) -> Elem {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Matrix trace; only meaningful for `Matrix` rings.
    pub fn matrix_trace(&self, a: &Elem) -> Result<Elem> {
        match (self, a) {
            (Ring::Matrix(k, base), Elem::Matrix(x)) => {
                let mut t = base.zero();
                for i in 0..*k {
                    t = base.add(&t, &x[i * k + i]);
                }
                Ok(t)
            }
            _ => Err(Error::Unsupported("matrix trace needs a matrix ring".into())),
        }
    }

    /// Checks that an element tree has the shape this ring expects.
    pub fn check_elem(&self, a: &Elem) -> Result<()> {
        let ok = match (self, a) {
            (Ring::Integers, Elem::Int(_)) => true,
            (Ring::Modular(m), Elem::Int(x)) => {
                !x.is_negative() && *x < BigInt::from(*m)
            }
            (Ring::Matrix(k, base), Elem::Matrix(x)) => {
                x.len() == k * k && x.iter().all(|u| base.check_elem(u).is_ok())
            }
            (Ring::FreeAssoc { gens, max_len }, Elem::Free(x)) => x.iter().all(|(w, c)| {
                w.len() <= *max_len
                    && w.iter().all(|&g| (g as usize) < gens.len())
                    && !c.is_zero()
            }),
            (Ring::CommPoly { vars, base }, Elem::Poly(x)) => x.iter().all(|(e, c)| {
                e.len() == vars.len()
                    && !c.is_zero()
                    && base.check_elem(&Elem::Int(c.clone())).is_ok()
            }),
            (Ring::Product(l, r), Elem::Pair(a1, a2)) => {
                l.check_elem(a1).is_ok() && r.check_elem(a2).is_ok()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!("element does not fit ring {self:?}")))
        }
    }

    /// Single-generator helper for free rings: the word `g_i`.
    pub fn free_gen(&self, i: usize) -> Result<Elem> {
        match self {
            Ring::FreeAssoc { gens, .. } if i < gens.len() => {
                let mut m = BTreeMap::new();
                m.insert(vec![i as u8], BigInt::one());
                Ok(Elem::Free(m))
            }
            _ => Err(Error::Unsupported("free_gen needs a free ring".into())),
        }
    }

    /// Looks up a generator of a free ring by name and returns it as an element.
    pub fn free_gen_named(&self, name: &str) -> Result<Elem> {
        match self {
            Ring::FreeAssoc { gens, .. } => {
                let i = gens
                    .iter()
                    .position(|g| g == name)
                    .ok_or_else(|| Error::Config(format!("unknown generator {name}")))?;
                self.free_gen(i)
            }
            _ => Err(Error::Unsupported("free_gen_named needs a free ring".into())),
        }
    }
}

/// Adds `coeff` to the entry `key` of a term map, dropping the entry when
/// the total reduces to zero.
fn add_term<K: Ord>(map: &mut BTreeMap<K, BigInt>, key: K, coeff: BigInt, base: &Ring) {
    let coeff = base.reduce_int(coeff);
    if coeff.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(coeff);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let total = base.reduce_int(e.get() + coeff);
            if total.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = total;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn free_ring() -> Ring {
        Ring::FreeAssoc {
            gens: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            max_len: 6,
        }
    }

    #[test]
    fn descriptor_validation() {
        assert!(Ring::Modular(1).make().is_err());
        assert!(Ring::Modular(6).make().is_ok());
        assert!(Ring::Matrix(0, Box::new(Ring::Integers)).make().is_err());
        assert!(Ring::FreeAssoc { gens: vec!["a".into(), "a".into()], max_len: 3 }
            .make()
            .is_err());
        assert!(Ring::CommPoly {
            vars: vec!["x".into()],
            base: Box::new(Ring::FreeAssoc { gens: vec!["a".into()], max_len: 1 })
        }
        .make()
        .is_err());
    }

    #[test]
    fn metadata_flags() {
        assert!(!Ring::Modular(6).tq_torsion_free());
        assert_eq!(Ring::Modular(6).size(), Some(6));
        let m2z = Ring::Matrix(2, Box::new(Ring::Integers));
        assert!(m2z.tq_torsion_free());
        assert!(!m2z.is_commutative());
        assert!(free_ring().tq_torsion_free());
        assert!(Ring::Product(Box::new(Ring::Integers), Box::new(Ring::Modular(4)))
            .tq_torsion_free()
            .eq(&false));
    }

    #[test]
    fn free_ring_truncation() {
        // word "abcabca" has length 7 > 6, so the product collapses to zero
        let r = free_ring();
        let a = r.free_gen_named("a").unwrap();
        let b = r.free_gen_named("b").unwrap();
        let c = r.free_gen_named("c").unwrap();
        let abc = r.mul(&r.mul(&a, &b), &c);
        let w6 = r.mul(&abc, &abc);
        assert!(!r.is_zero(&w6));
        let w7 = r.mul(&w6, &a);
        assert!(r.is_zero(&w7));
    }

    #[test]
    fn ring_axioms_hold_on_random_samples() {
        let rings = vec![
            Ring::Integers,
            Ring::Modular(6),
            Ring::Matrix(2, Box::new(Ring::Integers)),
            Ring::Matrix(2, Box::new(Ring::Modular(4))),
            free_ring(),
            Ring::CommPoly { vars: vec!["x".into(), "y".into()], base: Box::new(Ring::Integers) },
            Ring::Product(Box::new(Ring::Integers), Box::new(Ring::Modular(5))),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ring in rings {
            for _ in 0..1000 {
                let r = sample_elem(&ring, &mut rng);
                let s = sample_elem(&ring, &mut rng);
                let u = sample_elem(&ring, &mut rng);
                assert_eq!(ring.add(&ring.add(&r, &s), &u), ring.add(&r, &ring.add(&s, &u)));
                assert_eq!(ring.mul(&ring.mul(&r, &s), &u), ring.mul(&r, &ring.mul(&s, &u)));
                assert_eq!(
                    ring.mul(&r, &ring.add(&s, &u)),
                    ring.add(&ring.mul(&r, &s), &ring.mul(&r, &u))
                );
                assert_eq!(ring.mul(&r, &ring.one()), r);
                assert_eq!(ring.mul(&ring.one(), &r), r);
            }
        }
    }
}
