//! Witt vector representatives over truncation sets.
//!
//! A representative stores Teichmueller coordinates: the class of the
//! ascending product `prod_{n in S} (1 - a_n t^n)` modulo `t^N`. Peeling
//! (`from_series`) is a section of realization (`to_series`), and the
//! ghost map is computed integrally as minus the coefficients of
//! `(t d/dt u) * u^{-1}`, so no rational numbers appear anywhere.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ring::{carrier_ring, tensor_embed, tensor_ring, trace_class, Elem, Ring};
use crate::series::{SpecialUnit, TruncatedSeries};

/// A finite divisor-closed set of positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationSet(BTreeSet<usize>);

impl TruncationSet {
    /// Builds a truncation set, rejecting zero members and sets that are
    /// not closed under divisors.
    pub fn new<I: IntoIterator<Item = usize>>(iter: I) -> Result<Self> {
        let set: BTreeSet<usize> = iter.into_iter().collect();
        if set.contains(&0) {
            return Err(Error::Config("truncation set members must be positive".into()));
        }
        for &n in &set {
            for d in 1..=n {
                if n % d == 0 && !set.contains(&d) {
                    return Err(Error::Config(format!(
                        "not divisor-closed: {n} is in the set but its divisor {d} is not"
                    )));
                }
            }
        }
        Ok(TruncationSet(set))
    }

    /// The full set {1, ..., prec-1}.
    pub fn full(prec: usize) -> Self {
        TruncationSet((1..prec).collect())
    }

    pub fn contains(&self, n: usize) -> bool {
        self.0.contains(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.iter().next_back().copied()
    }

    /// `S/n = {k | nk in S}`; again a truncation set.
    pub fn quotient(&self, n: usize) -> TruncationSet {
        TruncationSet(self.0.iter().filter(|&&m| m % n == 0).map(|&m| m / n).collect())
    }

    /// `S minus all multiples of k`; still divisor-closed.
    pub fn without_multiples(&self, k: usize) -> TruncationSet {
        TruncationSet(self.0.iter().filter(|&&m| m % k != 0).copied().collect())
    }

    pub fn is_subset_of(&self, other: &TruncationSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

/// Equality verdict for Witt classes. `Unknown` is a first-class answer:
/// ghost comparison is sound but only complete over rings whose
/// trace-class group is torsion free.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    NotEqual,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Equal => write!(f, "Equal"),
            Verdict::NotEqual => write!(f, "NotEqual"),
            Verdict::Unknown => write!(f, "Unknown"),
        }
    }
}

/// Trace-class-valued ghost components indexed by a truncation set.
/// Entries are stored for every index, zeros included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostVector {
    pub carrier: Ring,
    pub entries: BTreeMap<usize, Elem>,
}

impl GhostVector {
    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| self.carrier.is_zero(v))
    }

    pub fn add(&self, other: &GhostVector) -> Result<GhostVector> {
        if self.carrier != other.carrier
            || self.entries.keys().ne(other.entries.keys())
        {
            return Err(Error::Mismatch("ghost vectors are not comparable".into()));
        }
        let entries = self
            .entries
            .iter()
            .map(|(n, v)| (*n, self.carrier.add(v, &other.entries[n])))
            .collect();
        Ok(GhostVector { carrier: self.carrier.clone(), entries })
    }

    pub fn int_scale(&self, n: &BigInt) -> GhostVector {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (*k, self.carrier.int_scale(n, v)))
            .collect();
        GhostVector { carrier: self.carrier.clone(), entries }
    }

    /// Keeps only the entries with index in `keys`.
    pub fn restricted_to(&self, keys: &TruncationSet) -> GhostVector {
        GhostVector {
            carrier: self.carrier.clone(),
            entries: self
                .entries
                .iter()
                .filter(|(n, _)| keys.contains(**n))
                .map(|(n, v)| (*n, v.clone()))
                .collect(),
        }
    }
}

/// Entrywise shuffle product of ghost vectors over `R` and `S`, landing in
/// the trace classes of the tensor ring. The canonical trace-class
/// representatives are embedded and multiplied; this is only meaningful
/// for the supported tensor pairs, where one side is central.
pub fn ghost_shuffle(
    ring_x: &Ring,
    ring_y: &Ring,
    gx: &GhostVector,
    gy: &GhostVector,
) -> Result<GhostVector> {
    let target = tensor_ring(ring_x, ring_y)?;
    if gx.entries.keys().ne(gy.entries.keys()) {
        return Err(Error::Mismatch("ghost vectors have different index sets".into()));
    }
    let mut entries = BTreeMap::new();
    for (n, vx) in &gx.entries {
        let prod = tensor_embed(ring_x, ring_y, vx, &gy.entries[n])?;
        entries.insert(*n, trace_class(&target, &prod).value);
    }
    Ok(GhostVector { carrier: carrier_ring(&target), entries })
}

/// A Witt vector representative in Teichmueller coordinates. Zero
/// coordinates are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittRep {
    ring: Ring,
    prec: usize,
    tset: TruncationSet,
    coords: BTreeMap<usize, Elem>,
}

impl WittRep {
    /// The zero of the group: all coordinates vanish.
    pub fn neutral(ring: Ring, prec: usize, tset: TruncationSet) -> Result<Self> {
        check_window(prec, &tset)?;
        Ok(WittRep { ring, prec, tset, coords: BTreeMap::new() })
    }

    pub fn from_coords(
        ring: Ring,
        prec: usize,
        tset: TruncationSet,
        coords: BTreeMap<usize, Elem>,
    ) -> Result<Self> {
        check_window(prec, &tset)?;
        let mut clean = BTreeMap::new();
        for (n, a) in coords {
            if !tset.contains(n) {
                return Err(Error::Config(format!(
                    "coordinate index {n} is outside the truncation set"
                )));
            }
            ring.check_elem(&a)?;
            if !ring.is_zero(&a) {
                clean.insert(n, a);
            }
        }
        Ok(WittRep { ring, prec, tset, coords: clean })
    }

    /// The class of `1 - a t^n`.
    pub fn teichmuller(
        ring: Ring,
        a: Elem,
        n: usize,
        prec: usize,
        tset: TruncationSet,
    ) -> Result<Self> {
        let mut coords = BTreeMap::new();
        coords.insert(n, a);
        WittRep::from_coords(ring, prec, tset, coords)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn truncation_set(&self) -> &TruncationSet {
        &self.tset
    }

    pub fn coords(&self) -> &BTreeMap<usize, Elem> {
        &self.coords
    }

    pub fn coord(&self, n: usize) -> Elem {
        self.coords.get(&n).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_neutral(&self) -> bool {
        self.coords.is_empty()
    }

    /// Realizes the coordinates as the ascending product
    /// `prod_{n in S} (1 - a_n t^n) mod t^N`.
    pub fn to_series(&self) -> SpecialUnit {
        let mut acc = SpecialUnit::one(&self.ring, self.prec);
        for (&n, a) in &self.coords {
            let f = SpecialUnit::teichmuller(&self.ring, a, n, self.prec)
                .expect("coordinate indices are below the precision");
            acc = acc.mul(&f).expect("same ring");
        }
        acc
    }

    /// Greedy ascending peeling. At each `n < N` the current remainder is
    /// `1 + c t^n + ...`; the factor `1 - (-c) t^n` is split off on the
    /// left, recorded when `n` is in the truncation set and discarded
    /// otherwise (which is exactly the reduction to `W_S`).
    pub fn from_series(u: &SpecialUnit, tset: TruncationSet) -> Result<Self> {
        let ring = u.ring().clone();
        let prec = u.precision();
        check_window(prec, &tset)?;
        let mut rem = u.clone();
        let mut coords = BTreeMap::new();
        for n in 1..prec {
            let c = rem.series().coeff(n).clone();
            if ring.is_zero(&c) {
                continue;
            }
            let a = ring.neg(&c);
            let factor = SpecialUnit::teichmuller(&ring, &a, n, prec)?;
            rem = factor.inv().mul(&rem)?;
            if tset.contains(n) {
                coords.insert(n, a);
            }
        }
        debug_assert!(rem.series().is_one());
        Ok(WittRep { ring, prec, tset, coords })
    }

    fn check_compat(&self, other: &WittRep) -> Result<()> {
        if self.ring != other.ring || self.prec != other.prec || self.tset != other.tset {
            return Err(Error::Mismatch(
                "Witt representatives differ in ring, precision or truncation set".into(),
            ));
        }
        Ok(())
    }

    /// Group addition: multiply the realizations and re-peel.
    pub fn add(&self, other: &WittRep) -> Result<WittRep> {
        self.check_compat(other)?;
        let u = self.to_series().mul(&other.to_series())?;
        WittRep::from_series(&u, self.tset.clone())
    }

    /// Group negation: invert the realization and re-peel.
    pub fn neg(&self) -> WittRep {
        WittRep::from_series(&self.to_series().inv(), self.tset.clone())
            .expect("precision unchanged")
    }

    /// The ghost map: `w_n = trace_class(-[t^n] (t d/dt u) u^{-1})` for
    /// each `n` in the truncation set.
    pub fn ghost(&self) -> GhostVector {
        let u = self.to_series();
        let du = u.series().t_weighted_derivative();
        let g = du.mul(u.inv().series()).expect("same ring");
        let mut entries = BTreeMap::new();
        for n in self.tset.iter() {
            let v = self.ring.neg(g.coeff(n));
            entries.insert(n, trace_class(&self.ring, &v).value);
        }
        GhostVector { carrier: carrier_ring(&self.ring), entries }
    }

    /// Sound equality test through ghosts. Complete (returns `Equal`)
    /// exactly when the trace-class group is torsion free; otherwise the
    /// honest answer for agreeing ghosts is `Unknown`.
    pub fn equals(&self, other: &WittRep) -> Result<Verdict> {
        self.check_compat(other)?;
        if self.ghost() != other.ghost() {
            return Ok(Verdict::NotEqual);
        }
        if self.ring.tq_torsion_free() {
            Ok(Verdict::Equal)
        } else {
            Ok(Verdict::Unknown)
        }
    }

    /// Verschiebung: substitutes `t -> t^n`, moving coordinate `a_k` to
    /// index `nk`. The input must live over `target/n`.
    pub fn verschiebung(&self, n: usize, target: TruncationSet) -> Result<WittRep> {
        if n == 0 {
            return Err(Error::Config("Verschiebung index must be positive".into()));
        }
        if self.tset != target.quotient(n) {
            return Err(Error::Mismatch(
                "input truncation set is not the quotient of the target".into(),
            ));
        }
        check_window(self.prec, &target)?;
        let u = self.to_series();
        let mut sub = TruncatedSeries::zero(&self.ring, self.prec);
        let mut i = 0;
        while n * i < self.prec {
            sub.set_coeff(n * i, u.series().coeff(i).clone());
            i += 1;
        }
        WittRep::from_series(&SpecialUnit::new(sub)?, target)
    }

    /// Frobenius, coordinate-wise on Teichmueller factors: `a_k`
    /// contributes `d` copies of `1 - a_k^{n/d} t^{k/d}` where
    /// `d = gcd(n, k)`. Indices that leave the target set are discarded
    /// by the final peeling.
    pub fn frobenius(&self, n: usize) -> Result<WittRep> {
        if n == 0 {
            return Err(Error::Config("Frobenius index must be positive".into()));
        }
        let target = self.tset.quotient(n);
        let mut acc = SpecialUnit::one(&self.ring, self.prec);
        for (&k, a) in &self.coords {
            let d = n.gcd(&k);
            let p = self.ring.pow(a, n / d);
            let idx = k / d;
            if idx >= self.prec {
                continue;
            }
            let factor = SpecialUnit::teichmuller(&self.ring, &p, idx, self.prec)?;
            for _ in 0..d {
                acc = acc.mul(&factor)?;
            }
        }
        WittRep::from_series(&acc, target)
    }

    /// Star product into the tensor ring. Coordinate pairs `(a_k, b_l)`
    /// contribute `d` copies of `1 - (a_k^{l/d} (x) b_l^{k/d}) t^{kl/d}`
    /// with `d = gcd(k, l)`.
    pub fn star(&self, other: &WittRep) -> Result<WittRep> {
        if self.prec != other.prec {
            return Err(Error::Mismatch("star needs equal precisions".into()));
        }
        if self.tset != other.tset {
            return Err(Error::Mismatch("star needs equal truncation sets".into()));
        }
        let target_ring = tensor_ring(&self.ring, &other.ring)?;
        let mut acc = SpecialUnit::one(&target_ring, self.prec);
        for (&k, a) in &self.coords {
            for (&l, b) in &other.coords {
                let d = k.gcd(&l);
                let idx = k * l / d;
                if idx >= self.prec {
                    continue;
                }
                let x = self.ring.pow(a, l / d);
                let y = other.ring.pow(b, k / d);
                let e = tensor_embed(&self.ring, &other.ring, &x, &y)?;
                let factor = SpecialUnit::teichmuller(&target_ring, &e, idx, self.prec)?;
                for _ in 0..d {
                    acc = acc.mul(&factor)?;
                }
            }
        }
        WittRep::from_series(&acc, self.tset.clone())
    }

    /// Reduction map: drop coordinates outside the sub-truncation-set.
    pub fn restrict(&self, target: TruncationSet) -> Result<WittRep> {
        if !target.is_subset_of(&self.tset) {
            return Err(Error::Mismatch(
                "restriction target is not a subset of the truncation set".into(),
            ));
        }
        let coords = self
            .coords
            .iter()
            .filter(|(n, _)| target.contains(**n))
            .map(|(n, a)| (*n, a.clone()))
            .collect();
        Ok(WittRep { ring: self.ring.clone(), prec: self.prec, tset: target, coords })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coords: serde_json::Map<String, serde_json::Value> = self
            .coords
            .iter()
            .map(|(n, a)| (n.to_string(), crate::ring::elem_to_json(&self.ring, a)))
            .collect();
        serde_json::json!({
            "ring": crate::ring::ring_to_json(&self.ring),
            "N": self.prec,
            "S": self.tset.to_vec(),
            "coords": coords,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<WittRep> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("Witt representative must be an object".into()))?;
        let ring = crate::ring::ring_from_json(
            obj.get("ring").ok_or_else(|| Error::Parse("missing `ring`".into()))?,
        )?;
        let prec = obj
            .get("N")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer `N`".into()))? as usize;
        let s_list = obj
            .get("S")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| Error::Parse("missing list `S`".into()))?;
        let mut s = Vec::with_capacity(s_list.len());
        for x in s_list {
            s.push(
                x.as_u64().ok_or_else(|| Error::Parse("`S` must contain integers".into()))?
                    as usize,
            );
        }
        let tset = TruncationSet::new(s)?;
        let mut coords = BTreeMap::new();
        if let Some(map) = obj.get("coords").and_then(serde_json::Value::as_object) {
            for (key, val) in map {
                let n: usize = key
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coordinate index `{key}`")))?;
                coords.insert(n, crate::ring::elem_from_json(&ring, val)?);
            }
        }
        WittRep::from_coords(ring, prec, tset, coords)
    }
}

impl GhostVector {
    pub fn to_json(&self) -> serde_json::Value {
        let entries: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .map(|(n, v)| (n.to_string(), crate::ring::elem_to_json(&self.carrier, v)))
            .collect();
        serde_json::json!({
            "S": self.entries.keys().collect::<Vec<_>>(),
            "entries": entries,
        })
    }
}

fn check_window(prec: usize, tset: &TruncationSet) -> Result<()> {
    if prec < 2 {
        return Err(Error::Config("precision must be at least 2".into()));
    }
    if let Some(m) = tset.max() {
        if m >= prec {
            return Err(Error::Config(format!(
                "truncation set member {m} is not below the precision {prec}"
            )));
        }
    }
    Ok(())
}
