//! Independent brute-force ground truth.
//!
//! For a finite ring the group of special units mod `t^N` is literally
//! enumerable. Quotienting by the subgroup generated by all commutators
//! and all `(1 - rf)(1 - fr)^{-1}` (with `f` running over series with
//! zero constant term) gives the exact Witt group at this precision, with
//! a decidable class-id function and no `Unknown` verdicts. The module
//! also carries the classical determinant and ghost-polynomial oracles
//! for commutative rings, and an alternative pivot order for the
//! non-commutative determinant.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::charpoly::SpecialMatrix;
use crate::error::{Error, Result};
use crate::ring::{enumerate_elems, sample_elem, Elem, Ring};
use crate::series::{SpecialUnit, TruncatedSeries};
use crate::witt::{TruncationSet, Verdict, WittRep};

const SIZE_GUARD: u128 = 1_000_000;

/// The exact Witt group of a finite ring at precision N, as a coset
/// table over the enumerated group of special units.
pub struct EnumeratedWitt {
    pub ring: Ring,
    pub prec: usize,
    elems: Vec<Elem>,
    elem_index: HashMap<Elem, usize>,
    units: Vec<Vec<usize>>,
    unit_index: HashMap<Vec<usize>, usize>,
    /// Sorted members of the relation subgroup H.
    relation_subgroup: Vec<usize>,
    /// Coset id per unit: the minimal unit index in its coset.
    class_of: Vec<usize>,
    pub num_classes: usize,
}

impl EnumeratedWitt {
    /// Enumerates the quotient. Guarded: `|R|^(N-1)` must stay at or
    /// below 10^6.
    pub fn enumerate(ring: &Ring, prec: usize) -> Result<Self> {
        if prec < 2 {
            return Err(Error::Config("precision must be at least 2".into()));
        }
        let card = ring
            .size()
            .ok_or_else(|| Error::Unsupported("enumeration needs a finite ring".into()))?;
        let mut group_size: u128 = 1;
        for _ in 1..prec {
            group_size = group_size
                .checked_mul(card)
                .filter(|&s| s <= SIZE_GUARD)
                .ok_or_else(|| {
                    Error::SizeGuard(format!(
                        "|R|^(N-1) = {card}^{} exceeds {SIZE_GUARD}",
                        prec - 1
                    ))
                })?;
        }
        let elems = enumerate_elems(ring)?;
        let elem_index: HashMap<Elem, usize> =
            elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();

        let n_units = group_size as usize;
        let mut units = Vec::with_capacity(n_units);
        let mut unit_index = HashMap::with_capacity(n_units);
        let mut tuple = vec![0usize; prec - 1];
        loop {
            unit_index.insert(tuple.clone(), units.len());
            units.push(tuple.clone());
            // increment in base |R|
            let mut pos = 0;
            loop {
                if pos == tuple.len() {
                    break;
                }
                tuple[pos] += 1;
                if tuple[pos] < elems.len() {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
            if pos == tuple.len() {
                break;
            }
        }
        debug_assert_eq!(units.len(), n_units);

        let mut table = EnumeratedWitt {
            ring: ring.clone(),
            prec,
            elems,
            elem_index,
            units,
            unit_index,
            relation_subgroup: Vec::new(),
            class_of: Vec::new(),
            num_classes: 0,
        };
        table.build_relation_subgroup()?;
        table.build_cosets();
        Ok(table)
    }

    pub fn group_size(&self) -> usize {
        self.units.len()
    }

    pub fn subgroup_size(&self) -> usize {
        self.relation_subgroup.len()
    }

    pub fn unit_series(&self, idx: usize) -> SpecialUnit {
        let mut s = TruncatedSeries::one(&self.ring, self.prec);
        for (d, &ei) in self.units[idx].iter().enumerate() {
            s.set_coeff(d + 1, self.elems[ei].clone());
        }
        SpecialUnit::new(s).expect("constant term is one")
    }

    fn series_key(&self, u: &SpecialUnit) -> Result<usize> {
        if u.ring() != &self.ring || u.precision() != self.prec {
            return Err(Error::Mismatch("series does not match the enumeration".into()));
        }
        let mut key = Vec::with_capacity(self.prec - 1);
        for d in 1..self.prec {
            let idx = self
                .elem_index
                .get(u.series().coeff(d))
                .ok_or_else(|| Error::Parse("coefficient not in the ring table".into()))?;
            key.push(*idx);
        }
        Ok(self.unit_index[&key])
    }

    fn mul_units(&self, a: usize, b: usize) -> usize {
        let p = self.unit_series(a).mul(&self.unit_series(b)).expect("same ring");
        self.series_key(&p).expect("product stays in the table")
    }

    fn inv_unit(&self, a: usize) -> usize {
        self.series_key(&self.unit_series(a).inv()).expect("inverse stays in the table")
    }

    /// Exact class id of a special unit at this precision; constant on
    /// cosets of the relation subgroup.
    pub fn class_of_series(&self, u: &SpecialUnit) -> Result<usize> {
        Ok(self.class_of[self.series_key(&u.truncate(self.prec))?])
    }

    /// Class id of a representative over the full truncation set.
    pub fn class_of_witt(&self, w: &WittRep) -> Result<usize> {
        self.class_of_series(&w.to_series().truncate(self.prec))
    }

    /// Generators: all commutators [u, v] plus all (1-rf)(1-fr)^{-1}.
    /// Since the set contains every commutator, the generated subgroup is
    /// automatically normal.
    fn build_relation_subgroup(&mut self) -> Result<()> {
        let n = self.units.len();
        let invs: Vec<usize> = (0..n).map(|i| self.inv_unit(i)).collect();
        let mut gens: BTreeSet<usize> = BTreeSet::new();

        for u in 0..n {
            for v in 0..n {
                let uv = self.mul_units(u, v);
                let c = self.mul_units(self.mul_units(uv, invs[u]), invs[v]);
                gens.insert(c);
            }
        }

        // (1 - r f)(1 - f r)^{-1} over all ring elements r and all series
        // f with zero constant term
        for f_idx in 0..n {
            let f = self.unit_series(f_idx);
            for r in &self.elems {
                let mut left = TruncatedSeries::one(&self.ring, self.prec);
                let mut right = TruncatedSeries::one(&self.ring, self.prec);
                for d in 1..self.prec {
                    // the unit with key f_idx encodes f = sum coeff_d t^d
                    let fd = f.series().coeff(d);
                    left.set_coeff(d, self.ring.neg(&self.ring.mul(r, fd)));
                    right.set_coeff(d, self.ring.neg(&self.ring.mul(fd, r)));
                }
                let lu = SpecialUnit::new(left)?;
                let ru = SpecialUnit::new(right)?;
                let prod = lu.mul(&ru.inv())?;
                gens.insert(self.series_key(&prod)?);
            }
        }

        let identity = self.series_key(&SpecialUnit::one(&self.ring, self.prec))?;
        gens.remove(&identity);

        // subgroup closure under products; inverses come for free in a
        // finite group
        let mut h: BTreeSet<usize> = BTreeSet::new();
        h.insert(identity);
        let mut queue: Vec<usize> = gens.iter().copied().collect();
        while let Some(x) = queue.pop() {
            if h.contains(&x) {
                continue;
            }
            let snapshot: Vec<usize> = h.iter().copied().collect();
            h.insert(x);
            for y in snapshot {
                queue.push(self.mul_units(x, y));
                queue.push(self.mul_units(y, x));
            }
            for g in gens.iter().copied().collect::<Vec<_>>() {
                queue.push(self.mul_units(x, g));
            }
        }
        self.relation_subgroup = h.into_iter().collect();
        Ok(())
    }

    fn build_cosets(&mut self) {
        let n = self.units.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = 0;
        for u in 0..n {
            if class_of[u] != usize::MAX {
                continue;
            }
            classes += 1;
            for &h in &self.relation_subgroup {
                let uh = self.mul_units(u, h);
                class_of[uh] = u;
            }
            debug_assert_eq!(class_of[u], u);
        }
        self.class_of = class_of;
        self.num_classes = classes;
    }

    /// True when conjugating every subgroup member by every group element
    /// stays inside the subgroup.
    pub fn subgroup_is_normal(&self) -> bool {
        let h: BTreeSet<usize> = self.relation_subgroup.iter().copied().collect();
        for &x in &self.relation_subgroup {
            for g in 0..self.units.len() {
                let c = self.mul_units(self.mul_units(g, x), self.inv_unit(g));
                if !h.contains(&c) {
                    return false;
                }
            }
        }
        true
    }

    /// Class ids of the image of `V_k` inside this quotient.
    pub fn image_of_verschiebung(&self, k: usize) -> Result<BTreeSet<usize>> {
        let inner = (self.prec - 1) / k;
        let mut out = BTreeSet::new();
        if inner == 0 {
            out.insert(self.class_of[self
                .series_key(&SpecialUnit::one(&self.ring, self.prec))?]);
            return Ok(out);
        }
        // enumerate all series 1 + sum c_i t^i at precision inner+1 and
        // substitute t -> t^k
        let mut tuple = vec![0usize; inner];
        loop {
            let mut s = TruncatedSeries::one(&self.ring, self.prec);
            for (i, &ei) in tuple.iter().enumerate() {
                s.set_coeff(k * (i + 1), self.elems[ei].clone());
            }
            out.insert(self.class_of[self.series_key(&SpecialUnit::new(s)?)?]);
            let mut pos = 0;
            loop {
                if pos == tuple.len() {
                    break;
                }
                tuple[pos] += 1;
                if tuple[pos] < self.elems.len() {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
            if pos == tuple.len() {
                break;
            }
        }
        Ok(out)
    }

    /// Class ids of the kernel of the reduction to `S minus multiples of
    /// k`: the classes of the subgroup generated by H together with all
    /// factors `1 - r t^d` for `d` a multiple of `k`.
    pub fn kernel_of_restriction(&self, k: usize) -> Result<BTreeSet<usize>> {
        let mut gens: BTreeSet<usize> =
            self.relation_subgroup.iter().copied().collect();
        for d in (1..self.prec).filter(|d| d % k == 0) {
            for r in &self.elems {
                let u = SpecialUnit::teichmuller(&self.ring, r, d, self.prec)?;
                gens.insert(self.series_key(&u)?);
            }
        }
        let identity = self.series_key(&SpecialUnit::one(&self.ring, self.prec))?;
        gens.remove(&identity);
        let mut h: BTreeSet<usize> = BTreeSet::new();
        h.insert(identity);
        let mut queue: Vec<usize> = gens.iter().copied().collect();
        while let Some(x) = queue.pop() {
            if h.contains(&x) {
                continue;
            }
            let snapshot: Vec<usize> = h.iter().copied().collect();
            h.insert(x);
            for y in snapshot {
                queue.push(self.mul_units(x, y));
                queue.push(self.mul_units(y, x));
            }
        }
        Ok(h.into_iter().map(|u| self.class_of[u]).collect())
    }
}

/// Gauss elimination with the opposite pivot sequence: columns are
/// cleared bottom-up above the pivot. An independent route to the same
/// Witt class, used to certify pivot-order independence.
pub fn witt_det_reversed(u: &SpecialMatrix, tset: &TruncationSet) -> Result<WittRep> {
    let ring = u.ring().clone();
    let k = u.size();
    let prec = u.precision();
    let mut m: Vec<TruncatedSeries> = (0..k * k)
        .map(|idx| u.entry(idx / k, idx % k).clone())
        .collect();
    for i in (0..k).rev() {
        let pivot_inv = SpecialUnit::new(m[i * k + i].clone())?.inv();
        for r in (0..i).rev() {
            if m[r * k + i].order().is_none() {
                continue;
            }
            let factor = m[r * k + i].mul(pivot_inv.series())?;
            for j in 0..=i {
                let sub = factor.mul(&m[i * k + j])?;
                m[r * k + j] = m[r * k + j].sub(&sub)?;
            }
        }
    }
    let mut acc = WittRep::neutral(ring, prec, tset.clone())?;
    for i in 0..k {
        let diag = SpecialUnit::new(m[i * k + i].clone())?;
        acc = acc.add(&WittRep::from_series(&diag, tset.clone())?)?;
    }
    Ok(acc)
}

/// Classical characteristic series `det(I - f t)` over a commutative
/// ring, by division-free cofactor expansion.
pub fn classical_char_poly(
    ring: &Ring,
    k: usize,
    f: &[Elem],
    prec: usize,
) -> Result<TruncatedSeries> {
    if !ring.is_commutative() {
        return Err(Error::Unsupported(
            "classical determinant needs a commutative ring".into(),
        ));
    }
    if f.len() != k * k {
        return Err(Error::Config(format!("endomorphism needs {k}x{k} entries")));
    }
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let mut s = if i == j {
                TruncatedSeries::one(ring, prec)
            } else {
                TruncatedSeries::zero(ring, prec)
            };
            s.set_coeff(1, ring.neg(&f[i * k + j]));
            entries.push(s);
        }
    }
    det_cofactor(ring, &entries, k, prec)
}

fn det_cofactor(
    ring: &Ring,
    m: &[TruncatedSeries],
    k: usize,
    prec: usize,
) -> Result<TruncatedSeries> {
    if k == 1 {
        return Ok(m[0].clone());
    }
    let mut acc = TruncatedSeries::zero(ring, prec);
    for i in 0..k {
        if m[i * k].order().is_none() {
            continue;
        }
        // minor obtained by deleting row i and column 0
        let mut minor = Vec::with_capacity((k - 1) * (k - 1));
        for r in 0..k {
            if r == i {
                continue;
            }
            for c in 1..k {
                minor.push(m[r * k + c].clone());
            }
        }
        let sub = det_cofactor(ring, &minor, k - 1, prec)?;
        let term = m[i * k].mul(&sub)?;
        if i % 2 == 0 {
            acc = acc.add(&term)?;
        } else {
            acc = acc.sub(&term)?;
        }
    }
    Ok(acc)
}

/// The classical big-Witt ghost polynomial
/// `w_n = sum over divisors d of n in S of d * a_d^{n/d}`,
/// valid over commutative rings.
pub fn ghost_poly_oracle(
    ring: &Ring,
    coords: &std::collections::BTreeMap<usize, Elem>,
    tset: &TruncationSet,
    n: usize,
) -> Result<Elem> {
    if !ring.is_commutative() {
        return Err(Error::Unsupported(
            "ghost polynomials need a commutative ring".into(),
        ));
    }
    let mut acc = ring.zero();
    for d in 1..=n {
        if !n.is_multiple_of(d) || !tset.contains(d) {
            continue;
        }
        if let Some(a) = coords.get(&d) {
            let p = ring.pow(a, n / d);
            acc = ring.add(&acc, &ring.int_scale(&BigInt::from(d), &p));
        }
    }
    Ok(acc)
}

/// Which brute-force checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleCheck {
    /// Every Equal/NotEqual verdict must match the coset table; Unknown
    /// verdicts get resolved and counted.
    Equality,
    /// Both pivot orders of the determinant land in the same class.
    PivotOrder,
    /// from_series / Frobenius / star map H-equivalent inputs to
    /// H-equivalent outputs.
    RepIndependence,
    /// image(V_k) equals kernel(restriction) inside the quotient.
    ExactSequence,
}

impl OracleCheck {
    pub const ALL: [OracleCheck; 4] = [
        OracleCheck::Equality,
        OracleCheck::PivotOrder,
        OracleCheck::RepIndependence,
        OracleCheck::ExactSequence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OracleCheck::Equality => "equality",
            OracleCheck::PivotOrder => "pivot",
            OracleCheck::RepIndependence => "representative",
            OracleCheck::ExactSequence => "exactness",
        }
    }

    pub fn from_name(name: &str) -> Result<Vec<OracleCheck>> {
        match name {
            "all" => Ok(Self::ALL.to_vec()),
            "equality" => Ok(vec![OracleCheck::Equality]),
            "pivot" => Ok(vec![OracleCheck::PivotOrder]),
            "representative" => Ok(vec![OracleCheck::RepIndependence]),
            "exactness" => Ok(vec![OracleCheck::ExactSequence]),
            other => Err(Error::Unsupported(format!("unknown check `{other}`"))),
        }
    }
}

/// Outcome of a brute-force run; `discrepancies` is expected to be empty.
pub struct OracleReport {
    pub ring: Ring,
    pub prec: usize,
    pub group_size: usize,
    pub num_classes: usize,
    pub seed: u64,
    pub checks: Vec<&'static str>,
    pub unknowns_resolved: usize,
    pub discrepancies: Vec<String>,
}

impl OracleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "ring": crate::ring::ring_to_json(&self.ring),
            "N": self.prec,
            "groupSize": self.group_size,
            "numClasses": self.num_classes,
            "seed": self.seed,
            "checks": self.checks,
            "unknownsResolved": self.unknowns_resolved,
            "discrepancies": self.discrepancies,
        })
    }
}

/// Runs the requested checks against the enumerated quotient.
pub fn run_checks(
    ring: &Ring,
    prec: usize,
    checks: &[OracleCheck],
    seed: u64,
) -> Result<OracleReport> {
    let table = EnumeratedWitt::enumerate(ring, prec)?;
    let full = TruncationSet::full(prec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut discrepancies = Vec::new();
    let mut unknowns = 0usize;

    for check in checks {
        match check {
            OracleCheck::Equality => {
                for i in 0..200 {
                    let (a, b) = if i % 2 == 0 {
                        // arbitrary pair
                        (
                            rng.gen_range(0..table.group_size()),
                            rng.gen_range(0..table.group_size()),
                        )
                    } else {
                        // an H-translate pair, guaranteed same class
                        let u = rng.gen_range(0..table.group_size());
                        let h = table.relation_subgroup
                            [rng.gen_range(0..table.subgroup_size())];
                        (u, table.mul_units(u, h))
                    };
                    let ua = table.unit_series(a);
                    let ub = table.unit_series(b);
                    let wa = WittRep::from_series(&ua, full.clone())?;
                    let wb = WittRep::from_series(&ub, full.clone())?;
                    let verdict = wa.equals(&wb)?;
                    let same = table.class_of_series(&ua)? == table.class_of_series(&ub)?;
                    match verdict {
                        Verdict::Equal if !same => discrepancies
                            .push(format!("equality: Equal but distinct classes ({a},{b})")),
                        Verdict::NotEqual if same => discrepancies
                            .push(format!("equality: NotEqual but same class ({a},{b})")),
                        Verdict::Unknown => unknowns += 1,
                        _ => {}
                    }
                }
            }
            OracleCheck::PivotOrder => {
                for trial in 0..50 {
                    let k = 2;
                    let mut entries = Vec::with_capacity(k * k);
                    for i in 0..k {
                        for j in 0..k {
                            let mut s = if i == j {
                                TruncatedSeries::one(ring, prec)
                            } else {
                                TruncatedSeries::zero(ring, prec)
                            };
                            for d in 1..prec {
                                s.set_coeff(d, sample_elem(ring, &mut rng));
                            }
                            entries.push(s);
                        }
                    }
                    let sm = SpecialMatrix::new(ring.clone(), k, entries)?;
                    let d1 = crate::charpoly::witt_det(&sm, &full)?;
                    let d2 = witt_det_reversed(&sm, &full)?;
                    if table.class_of_witt(&d1)? != table.class_of_witt(&d2)? {
                        discrepancies.push(format!("pivot: orders disagree on trial {trial}"));
                    }
                }
            }
            OracleCheck::RepIndependence => {
                let sub = full.without_multiples(2);
                let sub_kernel = table.kernel_of_restriction(2)?;
                let fr_prec = (prec - 1) / 2 + 1;
                let fr_table = if fr_prec >= 2 {
                    Some(EnumeratedWitt::enumerate(ring, fr_prec)?)
                } else {
                    None
                };
                let star_supported =
                    crate::ring::tensor_ring(ring, ring).map(|t| t == *ring).unwrap_or(false);
                for trial in 0..50 {
                    let u_idx = rng.gen_range(0..table.group_size());
                    let h_idx =
                        table.relation_subgroup[rng.gen_range(0..table.subgroup_size())];
                    let u = table.unit_series(u_idx);
                    let uh = table.unit_series(table.mul_units(u_idx, h_idx));

                    // from_series into a smaller truncation set: peeling
                    // changes the representative only inside the kernel
                    let w = WittRep::from_series(&u, sub.clone())?;
                    let realized = WittRep::from_coords(
                        ring.clone(),
                        prec,
                        full.clone(),
                        w.coords().clone(),
                    )?;
                    let diff = realized.to_series().mul(&u.inv())?;
                    let diff_class = table.class_of_series(&diff)?;
                    if !sub_kernel.contains(&diff_class) {
                        discrepancies.push(format!(
                            "representative: peeling left the restriction kernel on trial {trial}"
                        ));
                    }

                    // Frobenius on H-equivalent inputs
                    if let Some(ft) = &fr_table {
                        let w1 = WittRep::from_series(&u, full.clone())?;
                        let w2 = WittRep::from_series(&uh, full.clone())?;
                        let f1 = w1.frobenius(2)?;
                        let f2 = w2.frobenius(2)?;
                        let c1 = ft.class_of_series(&f1.to_series().truncate(fr_prec))?;
                        let c2 = ft.class_of_series(&f2.to_series().truncate(fr_prec))?;
                        if c1 != c2 {
                            discrepancies.push(format!(
                                "representative: F_2 split an H-pair on trial {trial}"
                            ));
                        }
                    }

                    // star on H-equivalent inputs
                    if star_supported {
                        let v_idx = rng.gen_range(0..table.group_size());
                        let v = table.unit_series(v_idx);
                        let wv = WittRep::from_series(&v, full.clone())?;
                        let s1 = WittRep::from_series(&u, full.clone())?.star(&wv)?;
                        let s2 = WittRep::from_series(&uh, full.clone())?.star(&wv)?;
                        let c1 = table.class_of_witt(&s1)?;
                        let c2 = table.class_of_witt(&s2)?;
                        if c1 != c2 {
                            discrepancies.push(format!(
                                "representative: star split an H-pair on trial {trial}"
                            ));
                        }
                    }
                }
            }
            OracleCheck::ExactSequence => {
                for k in 2..prec {
                    let image = table.image_of_verschiebung(k)?;
                    let kernel = table.kernel_of_restriction(k)?;
                    if image != kernel {
                        discrepancies.push(format!(
                            "exactness: image(V_{k}) has {} classes, kernel(restrict) has {}",
                            image.len(),
                            kernel.len()
                        ));
                    }
                }
            }
        }
    }

    Ok(OracleReport {
        ring: ring.clone(),
        prec,
        group_size: table.group_size(),
        num_classes: table.num_classes,
        seed,
        checks: checks.iter().map(OracleCheck::name).collect(),
        unknowns_resolved: unknowns,
        discrepancies,
    })
}
