//! The coefficient tier at matrix-bimodule scope.
//!
//! Chains of rectangular matrix bimodules `M_{k0 x k1}, M_{k1 x k2}, ...`
//! over a base ring close up cyclically, so tensor products over the
//! intermediate matrix rings are computable by plain matrix
//! multiplication and cyclic quotients land in the trace classes of the
//! base. The Weyl/trace rotation acts on pure-tensor words by moving the
//! last factor to the front.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{elem_from_json, elem_to_json, Elem, Ring};
use crate::witt::{GhostVector, TruncationSet, WittRep};

/// A rectangular matrix over a base ring, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Elem>,
}

impl RectMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Elem>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::Config(format!(
                "matrix shape {rows}x{cols} does not fit {} entries",
                entries.len()
            )));
        }
        Ok(RectMatrix { rows, cols, entries })
    }

    pub fn zero(base: &Ring, rows: usize, cols: usize) -> Self {
        RectMatrix { rows, cols, entries: vec![base.zero(); rows * cols] }
    }

    pub fn identity(base: &Ring, k: usize) -> Self {
        let mut m = RectMatrix::zero(base, k, k);
        for i in 0..k {
            m.entries[i * k + i] = base.one();
        }
        m
    }

    pub fn entry(&self, i: usize, j: usize) -> &Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self, base: &Ring) -> bool {
        self.entries.iter().all(|e| base.is_zero(e))
    }

    pub fn add(&self, base: &Ring, other: &RectMatrix) -> Result<RectMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Mismatch("matrix shapes differ".into()));
        }
        Ok(RectMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| base.add(a, b))
                .collect(),
        })
    }

    pub fn mul(&self, base: &Ring, other: &RectMatrix) -> Result<RectMatrix> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(format!(
                "shape mismatch: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = RectMatrix::zero(base, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let x = self.entry(i, l);
                if base.is_zero(x) {
                    continue;
                }
                for j in 0..other.cols {
                    let p = base.mul(x, other.entry(l, j));
                    let cur = &out.entries[i * other.cols + j];
                    out.entries[i * other.cols + j] = base.add(cur, &p);
                }
            }
        }
        Ok(out)
    }

    pub fn int_scale(&self, base: &Ring, n: &BigInt) -> RectMatrix {
        RectMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| base.int_scale(n, e)).collect(),
        }
    }

    /// Square matrix as an element of the ring `Matrix(k, base)`.
    pub fn to_elem(&self) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::Unsupported("only square matrices are ring elements".into()));
        }
        Ok(Elem::Matrix(self.entries.clone()))
    }

    pub fn from_elem(k: usize, e: &Elem) -> Result<RectMatrix> {
        match e {
            Elem::Matrix(cells) if cells.len() == k * k => {
                RectMatrix::new(k, k, cells.clone())
            }
            _ => Err(Error::Parse("expected a k x k matrix element".into())),
        }
    }
}

/// Descriptor of the bimodule of `left x right` matrices over a base
/// ring, acted on by `Matrix(left, base)` and `Matrix(right, base)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatBimodule {
    pub base: Ring,
    pub left: usize,
    pub right: usize,
}

/// An integer multiple of a pure tensor of chain-compatible matrix
/// factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorWord {
    pub coeff: BigInt,
    pub factors: Vec<RectMatrix>,
}

impl TensorWord {
    pub fn new(coeff: BigInt, factors: Vec<RectMatrix>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Config("tensor word needs at least one factor".into()));
        }
        for pair in factors.windows(2) {
            if pair[0].cols != pair[1].rows {
                return Err(Error::Mismatch(format!(
                    "adjacent factors do not compose: {}x{} then {}x{}",
                    pair[0].rows, pair[0].cols, pair[1].rows, pair[1].cols
                )));
            }
        }
        Ok(TensorWord { coeff, factors })
    }

    pub fn shape(&self) -> Vec<(usize, usize)> {
        self.factors.iter().map(|f| (f.rows, f.cols)).collect()
    }

    /// True when the word closes up: the last factor maps back to the
    /// row count of the first.
    pub fn is_cyclic(&self) -> bool {
        self.factors.last().unwrap().cols == self.factors[0].rows
    }

    /// Ordered product of the factors times the integer coefficient.
    pub fn contract(&self, base: &Ring) -> Result<RectMatrix> {
        let mut acc = self.factors[0].clone();
        for f in &self.factors[1..] {
            acc = acc.mul(base, f)?;
        }
        Ok(acc.int_scale(base, &self.coeff))
    }

    /// Moves the last factor to the front.
    pub fn rotate_right(&self) -> TensorWord {
        let mut factors = self.factors.clone();
        factors.rotate_right(1);
        TensorWord { coeff: self.coeff.clone(), factors }
    }

    pub fn to_json(&self, base: &Ring) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| {
                let rows: Vec<Value> = (0..f.rows)
                    .map(|i| {
                        Value::Array(
                            (0..f.cols).map(|j| elem_to_json(base, f.entry(i, j))).collect(),
                        )
                    })
                    .collect();
                Value::Array(rows)
            })
            .collect();
        json!({"coeff": self.coeff.to_string(), "factors": factors})
    }

    pub fn from_json(base: &Ring, v: &Value) -> Result<TensorWord> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("tensor word must be an object".into()))?;
        let coeff = crate::ring::parse_bigint(obj.get("coeff").unwrap_or(&Value::Null))?;
        let factors_v = obj
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("tensor word needs `factors`".into()))?;
        let mut factors = Vec::with_capacity(factors_v.len());
        for fv in factors_v {
            let rows_v = fv.as_array().ok_or_else(|| Error::Parse("factor must be a nested array".into()))?;
            let rows = rows_v.len();
            if rows == 0 {
                return Err(Error::Parse("factor needs at least one row".into()));
            }
            let cols = rows_v[0].as_array().map(|r| r.len()).unwrap_or(0);
            let mut entries = Vec::with_capacity(rows * cols);
            for row in rows_v {
                let cells = row.as_array().ok_or_else(|| Error::Parse("factor row must be an array".into()))?;
                if cells.len() != cols {
                    return Err(Error::Parse("ragged factor rows".into()));
                }
                for c in cells {
                    entries.push(elem_from_json(base, c)?);
                }
            }
            factors.push(RectMatrix::new(rows, cols, entries)?);
        }
        TensorWord::new(coeff, factors)
    }
}

/// A Witt representative with coefficients in a cyclic chain of matrix
/// bimodules. Coordinate `n` is a formal sum of pure-tensor words of
/// length `n * chain length`, following the chain pattern `n` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefWittRep {
    pub base: Ring,
    pub chain: Vec<(usize, usize)>,
    pub prec: usize,
    pub tset: TruncationSet,
    pub coords: BTreeMap<usize, Vec<TensorWord>>,
}

impl CoefWittRep {
    pub fn new(
        base: Ring,
        chain: Vec<(usize, usize)>,
        prec: usize,
        tset: TruncationSet,
        coords: BTreeMap<usize, Vec<TensorWord>>,
    ) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::Config("bimodule chain must be non-empty".into()));
        }
        let m = chain.len();
        for i in 0..m {
            if chain[i].1 != chain[(i + 1) % m].0 {
                return Err(Error::Mismatch("bimodule chain does not close up cyclically".into()));
            }
        }
        if let Some(mx) = tset.max() {
            if mx >= prec {
                return Err(Error::Config("truncation set must sit below the precision".into()));
            }
        }
        for (&n, words) in &coords {
            if !tset.contains(n) {
                return Err(Error::Config(format!("coordinate {n} outside the truncation set")));
            }
            for w in words {
                let expected: Vec<(usize, usize)> =
                    (0..n * m).map(|q| chain[q % m]).collect();
                if w.shape() != expected {
                    return Err(Error::Mismatch(format!(
                        "word in coordinate {n} does not follow the chain pattern"
                    )));
                }
            }
        }
        Ok(CoefWittRep { base, chain, prec, tset, coords })
    }

    pub fn neutral(base: Ring, chain: Vec<(usize, usize)>, prec: usize, tset: TruncationSet) -> Result<Self> {
        CoefWittRep::new(base, chain, prec, tset, BTreeMap::new())
    }

    /// The Weyl/trace rotation: every word moves its last factor to the
    /// front and the chain rotates along. Iterating it (word length)
    /// times on coordinate n returns the identical representative;
    /// iterating it (chain length) times already fixes the Witt class.
    pub fn weyl_shift(&self) -> CoefWittRep {
        let mut chain = self.chain.clone();
        chain.rotate_right(1);
        let coords = self
            .coords
            .iter()
            .map(|(n, words)| (*n, words.iter().map(TensorWord::rotate_right).collect()))
            .collect();
        CoefWittRep { base: self.base.clone(), chain, prec: self.prec, tset: self.tset.clone(), coords }
    }

    /// The trace-property isomorphism
    /// `W(R_0; M_{01} (x) ... (x) M_{m-1,0}) ~ W(R_{m-1}; M_{m-1,0} (x) ...)`;
    /// on representatives it is exactly the Weyl rotation.
    pub fn trace_iso(&self) -> CoefWittRep {
        self.weyl_shift()
    }

    /// Contracts coordinate `n` to a square matrix over the first chain ring.
    pub fn contract_coord(&self, n: usize) -> Result<RectMatrix> {
        let k0 = self.chain[0].0;
        let mut acc = RectMatrix::zero(&self.base, k0, k0);
        if let Some(words) = self.coords.get(&n) {
            for w in words {
                acc = acc.add(&self.base, &w.contract(&self.base)?)?;
            }
        }
        Ok(acc)
    }

    /// Coefficient ghosts: contract every coordinate into the matrix ring
    /// over the first chain size and apply the integral ghost formula
    /// there; entries are trace classes over the base.
    pub fn coef_ghost(&self) -> Result<GhostVector> {
        let k0 = self.chain[0].0;
        let ring = Ring::Matrix(k0, Box::new(self.base.clone()));
        let mut coords = BTreeMap::new();
        for &n in self.coords.keys() {
            let c = self.contract_coord(n)?;
            if !c.is_zero(&self.base) {
                coords.insert(n, c.to_elem()?);
            }
        }
        let w = WittRep::from_coords(ring, self.prec, self.tset.clone(), coords)?;
        Ok(w.ghost())
    }

    /// Reads a chain whose contracted coordinates are scalars (first
    /// chain size 1) as a plain Witt representative over the base. This
    /// is the evaluation map closing the Morita composite.
    pub fn evaluate_scalars(&self) -> Result<WittRep> {
        if self.chain[0].0 != 1 {
            return Err(Error::Unsupported(
                "evaluation needs a chain starting at size 1".into(),
            ));
        }
        let mut coords = BTreeMap::new();
        for &n in self.coords.keys() {
            let c = self.contract_coord(n)?;
            coords.insert(n, c.entries[0].clone());
        }
        WittRep::from_coords(self.base.clone(), self.prec, self.tset.clone(), coords)
    }

    pub fn to_json(&self) -> Value {
        let coords: serde_json::Map<String, Value> = self
            .coords
            .iter()
            .map(|(n, words)| {
                (
                    n.to_string(),
                    Value::Array(words.iter().map(|w| w.to_json(&self.base)).collect()),
                )
            })
            .collect();
        json!({
            "ring": crate::ring::ring_to_json(&self.base),
            "N": self.prec,
            "S": self.tset.to_vec(),
            "chain": self.chain.iter().map(|(k, l)| json!({"k": k, "l": l})).collect::<Vec<_>>(),
            "coords": coords,
        })
    }

    pub fn from_json(v: &Value) -> Result<CoefWittRep> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("coefficient representative must be an object".into()))?;
        let base = crate::ring::ring_from_json(
            obj.get("ring").ok_or_else(|| Error::Parse("missing `ring`".into()))?,
        )?;
        let prec = obj
            .get("N")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer `N`".into()))? as usize;
        let s_list = obj
            .get("S")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing list `S`".into()))?;
        let mut s = Vec::with_capacity(s_list.len());
        for x in s_list {
            s.push(x.as_u64().ok_or_else(|| Error::Parse("`S` must contain integers".into()))?
                as usize);
        }
        let tset = TruncationSet::new(s)?;
        let chain_v = obj
            .get("chain")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing list `chain`".into()))?;
        let mut chain = Vec::with_capacity(chain_v.len());
        for link in chain_v {
            let k = link
                .get("k")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("chain links need `k`".into()))?;
            let l = link
                .get("l")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("chain links need `l`".into()))?;
            chain.push((k as usize, l as usize));
        }
        let mut coords = BTreeMap::new();
        if let Some(map) = obj.get("coords").and_then(Value::as_object) {
            for (key, val) in map {
                let n: usize = key
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coordinate index `{key}`")))?;
                let words_v = val
                    .as_array()
                    .ok_or_else(|| Error::Parse("coordinates must be lists of words".into()))?;
                let mut words = Vec::with_capacity(words_v.len());
                for w in words_v {
                    words.push(TensorWord::from_json(&base, w)?);
                }
                coords.insert(n, words);
            }
        }
        CoefWittRep::new(base, chain, prec, tset, coords)
    }
}

/// Splits a square matrix into pure `(k x l, l x k)` pairs summing to it
/// by column slicing: block `s` keeps columns `[s*l, s*l + l)` of `C`
/// (zero-padded) and the matching `l x k` selector rows.
pub fn decompose_pure(base: &Ring, c: &RectMatrix, l: usize) -> Result<Vec<(RectMatrix, RectMatrix)>> {
    if c.rows != c.cols {
        return Err(Error::Unsupported("decompose_pure needs a square matrix".into()));
    }
    if l == 0 {
        return Err(Error::Config("slice width must be positive".into()));
    }
    let k = c.rows;
    if c.is_zero(base) {
        return Ok(Vec::new());
    }
    let blocks = k.div_ceil(l);
    let mut out = Vec::with_capacity(blocks);
    for s in 0..blocks {
        let mut a = RectMatrix::zero(base, k, l);
        for i in 0..k {
            for j in 0..l {
                let col = s * l + j;
                if col < k {
                    a.entries[i * l + j] = c.entry(i, col).clone();
                }
            }
        }
        let mut b = RectMatrix::zero(base, l, k);
        for i in 0..l {
            let col = s * l + i;
            if col < k {
                b.entries[i * k + col] = base.one();
            }
        }
        out.push((a, b));
    }
    Ok(out)
}

/// Characteristic element with coefficients for a free module of rank `r`
/// over `Matrix(k, base)` and a square coefficient bimodule: the Gauss
/// determinant runs over series with entries contracted into the matrix
/// ring, and the resulting coordinates are re-expanded as pure words
/// `C (x) I (x) ... (x) I`.
pub fn chi_coef(
    base: &Ring,
    k: usize,
    r: usize,
    f: &[RectMatrix],
    tset: &TruncationSet,
    prec: usize,
) -> Result<CoefWittRep> {
    if f.len() != r * r {
        return Err(Error::Config(format!("block map needs {r}x{r} blocks")));
    }
    for blk in f {
        if blk.rows != k || blk.cols != k {
            return Err(Error::Unsupported("coefficient bimodule must be square".into()));
        }
    }
    let ring = Ring::Matrix(k, Box::new(base.clone()));
    let elems: Vec<Elem> = f.iter().map(|b| b.to_elem()).collect::<Result<_>>()?;
    let w = crate::charpoly::chi(&ring, r, &elems, tset, prec)?;
    let mut coords = BTreeMap::new();
    for (&n, a) in w.coords() {
        let c = RectMatrix::from_elem(k, a)?;
        let mut factors = vec![RectMatrix::identity(base, k); n];
        factors[0] = c;
        coords.insert(n, vec![TensorWord::new(BigInt::one(), factors)?]);
    }
    CoefWittRep::new(base.clone(), vec![(k, k)], prec, tset.clone(), coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{sample_elem, trace_class};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn int(n: i64) -> Elem {
        Elem::Int(BigInt::from(n))
    }

    fn rand_rect<R: rand::Rng>(base: &Ring, rows: usize, cols: usize, rng: &mut R) -> RectMatrix {
        RectMatrix {
            rows,
            cols,
            entries: (0..rows * cols).map(|_| sample_elem(base, rng)).collect(),
        }
    }

    #[test]
    fn bimodule_actions_associate() {
        // (AX)B = A(XB) for A in Matrix(k), X in M_{k x l}, B in Matrix(l)
        let base = Ring::Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for _ in 0..100 {
            let a = rand_rect(&base, 2, 2, &mut rng);
            let x = rand_rect(&base, 2, 3, &mut rng);
            let b = rand_rect(&base, 3, 3, &mut rng);
            let lhs = a.mul(&base, &x).unwrap().mul(&base, &b).unwrap();
            let rhs = a.mul(&base, &x.mul(&base, &b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn contraction_is_the_ordered_product() {
        let base = Ring::Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(89);
        let a = rand_rect(&base, 2, 3, &mut rng);
        let b = rand_rect(&base, 3, 2, &mut rng);
        let w = TensorWord::new(BigInt::one(), vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(w.contract(&base).unwrap(), a.mul(&base, &b).unwrap());

        let single = TensorWord::new(BigInt::one(), vec![a.clone()]).unwrap();
        assert_eq!(single.contract(&base).unwrap(), a);

        let ids = TensorWord::new(
            BigInt::one(),
            vec![RectMatrix::identity(&base, 2), RectMatrix::identity(&base, 2)],
        )
        .unwrap();
        assert_eq!(ids.contract(&base).unwrap(), RectMatrix::identity(&base, 2));

        // shape mismatch is rejected
        assert!(TensorWord::new(BigInt::one(), vec![a.clone(), a]).is_err());
    }

    #[test]
    fn weyl_shift_rotates_words_and_chain() {
        let base = Ring::Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        let a = rand_rect(&base, 2, 3, &mut rng);
        let b = rand_rect(&base, 3, 2, &mut rng);
        let s = TruncationSet::new([1]).unwrap();
        let mut coords = BTreeMap::new();
        coords.insert(1, vec![TensorWord::new(BigInt::one(), vec![a.clone(), b.clone()]).unwrap()]);
        let w = CoefWittRep::new(base.clone(), vec![(2, 3), (3, 2)], 3, s, coords).unwrap();

        let shifted = w.weyl_shift();
        assert_eq!(shifted.chain, vec![(3, 2), (2, 3)]);
        assert_eq!(shifted.coords[&1][0].factors, vec![b, a]);

        // word length many shifts return the identical representative
        let twice = shifted.weyl_shift();
        assert_eq!(twice, w);

        // a chain of identity factors is fixed by the rotation
        let s = TruncationSet::new([1]).unwrap();
        let mut coords = BTreeMap::new();
        let ids = vec![RectMatrix::identity(&base, 2), RectMatrix::identity(&base, 2)];
        coords.insert(1, vec![TensorWord::new(BigInt::one(), ids).unwrap()]);
        let wi = CoefWittRep::new(base, vec![(2, 2), (2, 2)], 3, s, coords).unwrap();
        assert_eq!(wi.trace_iso().coords, wi.coords);
    }

    #[test]
    fn scalar_chain_shift_is_identity() {
        // 1x1 words over a commutative base: rotation does nothing
        let base = Ring::Integers;
        let s = TruncationSet::new([1, 2]).unwrap();
        let mk = |v: i64| RectMatrix { rows: 1, cols: 1, entries: vec![int(v)] };
        let mut coords = BTreeMap::new();
        coords.insert(2, vec![TensorWord::new(BigInt::one(), vec![mk(2), mk(3)]).unwrap()]);
        let w = CoefWittRep::new(base, vec![(1, 1)], 3, s, coords).unwrap();
        let shifted = w.weyl_shift();
        assert_eq!(shifted.coef_ghost().unwrap(), w.coef_ghost().unwrap());
    }

    #[test]
    fn trace_iso_preserves_coefficient_ghosts() {
        let bases = [Ring::Integers, Ring::Modular(5)];
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for base in bases {
            for _ in 0..100 {
                let k = 2;
                let l = 3;
                let a = rand_rect(&base, k, l, &mut rng);
                let b = rand_rect(&base, l, k, &mut rng);
                let s = TruncationSet::new([1, 2, 3]).unwrap();
                let mut coords = BTreeMap::new();
                coords
                    .insert(1, vec![TensorWord::new(BigInt::one(), vec![a.clone(), b.clone()]).unwrap()]);
                let w = CoefWittRep::new(base.clone(), vec![(k, l), (l, k)], 4, s, coords).unwrap();
                assert_eq!(w.trace_iso().coef_ghost().unwrap(), w.coef_ghost().unwrap());
            }
        }
    }

    #[test]
    fn coef_ghost_of_tau_is_trace_of_powers() {
        let base = Ring::Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        // square single factor
        let a = rand_rect(&base, 2, 2, &mut rng);
        let s = TruncationSet::new([1, 2, 3, 4]).unwrap();
        let mut coords = BTreeMap::new();
        coords.insert(1, vec![TensorWord::new(BigInt::one(), vec![a.clone()]).unwrap()]);
        let w = CoefWittRep::new(base.clone(), vec![(2, 2)], 5, s.clone(), coords).unwrap();
        let g = w.coef_ghost().unwrap();
        let mring = Ring::Matrix(2, Box::new(base.clone()));
        let ae = a.to_elem().unwrap();
        for n in 1..=4usize {
            assert_eq!(g.entries[&n], trace_class(&mring, &mring.pow(&ae, n)).value);
        }

        // rectangular pair: entries are trace classes of (AB)^n
        let a = rand_rect(&base, 2, 3, &mut rng);
        let b = rand_rect(&base, 3, 2, &mut rng);
        let mut coords = BTreeMap::new();
        coords.insert(1, vec![TensorWord::new(BigInt::one(), vec![a.clone(), b.clone()]).unwrap()]);
        let w = CoefWittRep::new(base.clone(), vec![(2, 3), (3, 2)], 5, s.clone(), coords).unwrap();
        let g = w.coef_ghost().unwrap();
        let ab = a.mul(&base, &b).unwrap().to_elem().unwrap();
        for n in 1..=4usize {
            assert_eq!(g.entries[&n], trace_class(&mring, &mring.pow(&ab, n)).value);
        }

        // the neutral element has zero ghosts
        let z = CoefWittRep::neutral(base, vec![(2, 2)], 5, s).unwrap();
        assert!(z.coef_ghost().unwrap().is_zero());
    }

    #[test]
    fn decompose_pure_sums_back() {
        let base = Ring::Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(107);
        for (k, l) in [(2, 2), (2, 1), (3, 2)] {
            let c = rand_rect(&base, k, k, &mut rng);
            let parts = decompose_pure(&base, &c, l).unwrap();
            let mut acc = RectMatrix::zero(&base, k, k);
            for (a, b) in &parts {
                assert_eq!(a.rows, k);
                assert_eq!(a.cols, l);
                assert_eq!(b.rows, l);
                assert_eq!(b.cols, k);
                acc = acc.add(&base, &a.mul(&base, b).unwrap()).unwrap();
            }
            assert_eq!(acc, c);
        }
        // k = l keeps the matrix whole
        let c = rand_rect(&base, 2, 2, &mut rng);
        let parts = decompose_pure(&base, &c, 2).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, c);
        assert_eq!(parts[0].1, RectMatrix::identity(&base, 2));
        // zero decomposes to nothing
        assert!(decompose_pure(&base, &RectMatrix::zero(&base, 2, 2), 1).unwrap().is_empty());
    }

    #[test]
    fn chi_coef_rank_one_is_teichmuller() {
        let base = Ring::Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(109);
        let f = rand_rect(&base, 2, 2, &mut rng);
        let s = TruncationSet::new([1, 2, 3]).unwrap();
        let w = chi_coef(&base, 2, 1, std::slice::from_ref(&f), &s, 4).unwrap();
        assert_eq!(w.coords.len(), 1);
        assert_eq!(w.coords[&1].len(), 1);
        assert_eq!(w.coords[&1][0].factors, vec![f]);

        // zero map gives the neutral element
        let z = chi_coef(&base, 2, 1, &[RectMatrix::zero(&base, 2, 2)], &s, 4).unwrap();
        assert!(z.coords.is_empty());
    }

    #[test]
    fn chi_coef_ghosts_are_traces_of_powers() {
        let base = Ring::Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(113);
        let k = 2;
        let r = 2;
        let s = TruncationSet::new([1, 2, 3, 4]).unwrap();
        for _ in 0..20 {
            let blocks: Vec<RectMatrix> =
                (0..r * r).map(|_| rand_rect(&base, k, k, &mut rng)).collect();
            let w = chi_coef(&base, k, r, &blocks, &s, 5).unwrap();
            let g = w.coef_ghost().unwrap();
            // flatten to an rk x rk matrix over the base
            let big = Ring::Matrix(r * k, Box::new(base.clone()));
            let mut flat = vec![base.zero(); (r * k) * (r * k)];
            for bi in 0..r {
                for bj in 0..r {
                    let blk = &blocks[bi * r + bj];
                    for i in 0..k {
                        for j in 0..k {
                            flat[(bi * k + i) * (r * k) + (bj * k + j)] =
                                blk.entry(i, j).clone();
                        }
                    }
                }
            }
            let fe = Elem::Matrix(flat);
            for n in 1..=4usize {
                assert_eq!(g.entries[&n], trace_class(&big, &big.pow(&fe, n)).value);
            }
        }
    }

    #[test]
    fn tensor_word_relations_hold_at_ghost_level() {
        // moving a square factor across the tensor sign does not change
        // the contraction, hence not the ghosts
        let base = Ring::Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(127);
        let a = rand_rect(&base, 2, 3, &mut rng);
        let rmid = rand_rect(&base, 3, 3, &mut rng);
        let b = rand_rect(&base, 3, 2, &mut rng);
        let s = TruncationSet::new([1, 2]).unwrap();
        let mut c1 = BTreeMap::new();
        c1.insert(
            1,
            vec![TensorWord::new(BigInt::one(), vec![a.mul(&base, &rmid).unwrap(), b.clone()]).unwrap()],
        );
        let mut c2 = BTreeMap::new();
        c2.insert(
            1,
            vec![TensorWord::new(BigInt::one(), vec![a.clone(), rmid.mul(&base, &b).unwrap()]).unwrap()],
        );
        let w1 = CoefWittRep::new(base.clone(), vec![(2, 3), (3, 2)], 3, s.clone(), c1).unwrap();
        let w2 = CoefWittRep::new(base, vec![(2, 3), (3, 2)], 3, s, c2).unwrap();
        assert_eq!(w1.coef_ghost().unwrap(), w2.coef_ghost().unwrap());
    }

    #[test]
    fn morita_composite_matches_charpoly_morita_map() {
        // rank-one generators C = A B over Matrix(k, S): rotating the
        // (k x 1, 1 x k) chain and evaluating reproduces morita_map
        let bases = [Ring::Integers, Ring::Modular(5)];
        let mut rng = ChaCha8Rng::seed_from_u64(131);
        for base in bases {
            for _ in 0..50 {
                let k = 2;
                let a = rand_rect(&base, k, 1, &mut rng);
                let b = rand_rect(&base, 1, k, &mut rng);
                let c = a.mul(&base, &b).unwrap();
                let s = TruncationSet::new([1, 2, 3]).unwrap();

                let mring = Ring::Matrix(k, Box::new(base.clone()));
                let tau = WittRep::teichmuller(
                    mring,
                    c.to_elem().unwrap(),
                    1,
                    4,
                    s.clone(),
                )
                .unwrap();
                let via_det = crate::charpoly::morita_map(&tau).unwrap();

                let mut coords = BTreeMap::new();
                coords.insert(
                    1,
                    vec![TensorWord::new(BigInt::one(), vec![a.clone(), b.clone()]).unwrap()],
                );
                let w = CoefWittRep::new(base.clone(), vec![(k, 1), (1, k)], 4, s, coords).unwrap();
                let via_trace = w.trace_iso().evaluate_scalars().unwrap();
                assert_eq!(via_det, via_trace);
            }
        }
    }

    #[test]
    fn tensor_word_json_round_trip() {
        let base = Ring::Integers;
        let mut rng = ChaCha8Rng::seed_from_u64(137);
        let a = rand_rect(&base, 2, 3, &mut rng);
        let b = rand_rect(&base, 3, 2, &mut rng);
        let w = TensorWord::new(BigInt::from(-4), vec![a.clone(), b.clone()]).unwrap();
        let back = TensorWord::from_json(&base, &w.to_json(&base)).unwrap();
        assert_eq!(back, w);

        let s = TruncationSet::new([1, 2]).unwrap();
        let mut coords = BTreeMap::new();
        coords.insert(1, vec![TensorWord::new(BigInt::one(), vec![a, b]).unwrap()]);
        let rep = CoefWittRep::new(base, vec![(2, 3), (3, 2)], 3, s, coords).unwrap();
        let back = CoefWittRep::from_json(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
    }
}
