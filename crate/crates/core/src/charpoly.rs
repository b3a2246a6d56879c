//! Non-commutative determinants and characteristic elements.
//!
//! The determinant of a special matrix (a square matrix of truncated
//! series congruent to the identity mod t) is computed by Gauss
//! elimination: diagonal pivots are special units and stay invertible
//! throughout, rows below the pivot are cleared by left multiplication
//! with elementary matrices, and the Witt classes of the diagonal entries
//! are summed. The characteristic element of an endomorphism f is the
//! determinant of `I - f t`.

use crate::error::{Error, Result};
use crate::ring::{trace_class, Elem, Ring, TraceClass};
use crate::series::{SpecialUnit, TruncatedSeries};
use crate::witt::{TruncationSet, WittRep};

/// A square matrix over the truncated series ring whose constant term is
/// the identity matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialMatrix {
    ring: Ring,
    size: usize,
    prec: usize,
    entries: Vec<TruncatedSeries>,
}

impl SpecialMatrix {
    pub fn new(ring: Ring, size: usize, entries: Vec<TruncatedSeries>) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(Error::Config(format!(
                "special matrix needs {0}x{0} series entries",
                size
            )));
        }
        let prec = entries.iter().map(|e| e.precision()).min().unwrap();
        for (idx, e) in entries.iter().enumerate() {
            if e.ring() != &ring {
                return Err(Error::Mismatch("matrix entries live over different rings".into()));
            }
            let expect = if idx / size == idx % size { ring.one() } else { ring.zero() };
            if e.coeff(0) != &expect {
                return Err(Error::Unsupported(
                    "not a special matrix: constant term is not the identity".into(),
                ));
            }
        }
        let entries = entries.iter().map(|e| e.truncate(prec)).collect();
        Ok(SpecialMatrix { ring, size, prec, entries })
    }

    /// `I - f t` for a k x k matrix `f` over the ring.
    pub fn one_minus_ft(ring: &Ring, size: usize, f: &[Elem], prec: usize) -> Result<Self> {
        if f.len() != size * size {
            return Err(Error::Config(format!("endomorphism needs {0}x{0} entries", size)));
        }
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                let mut s = if i == j {
                    TruncatedSeries::one(ring, prec)
                } else {
                    TruncatedSeries::zero(ring, prec)
                };
                s.set_coeff(1, ring.neg(&f[i * size + j]));
                entries.push(s);
            }
        }
        SpecialMatrix::new(ring.clone(), size, entries)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn entry(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.entries[i * self.size + j]
    }

    /// `{"ring":..., "k":..., "N":..., "entries": [[coeff-list...]...]}`;
    /// every entry is its list of coefficients, the shared ring and
    /// precision are stated once.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.size)
            .map(|i| {
                serde_json::Value::Array(
                    (0..self.size)
                        .map(|j| {
                            serde_json::Value::Array(
                                self.entry(i, j)
                                    .coeffs()
                                    .iter()
                                    .map(|c| crate::ring::elem_to_json(&self.ring, c))
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({
            "ring": crate::ring::ring_to_json(&self.ring),
            "k": self.size,
            "N": self.prec,
            "entries": rows,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SpecialMatrix> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("special matrix must be an object".into()))?;
        let ring = crate::ring::ring_from_json(
            obj.get("ring").ok_or_else(|| Error::Parse("missing `ring`".into()))?,
        )?;
        let k = obj
            .get("k")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer `k`".into()))? as usize;
        let prec = obj
            .get("N")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer `N`".into()))? as usize;
        let rows = obj
            .get("entries")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| Error::Parse("missing `entries`".into()))?;
        if rows.len() != k {
            return Err(Error::Parse(format!("expected {k} rows")));
        }
        let mut entries = Vec::with_capacity(k * k);
        for row in rows {
            let cells = row
                .as_array()
                .ok_or_else(|| Error::Parse("entry rows must be arrays".into()))?;
            if cells.len() != k {
                return Err(Error::Parse(format!("expected {k} entries per row")));
            }
            for cell in cells {
                let coeff_v = cell
                    .as_array()
                    .ok_or_else(|| Error::Parse("series entries must be coefficient lists".into()))?;
                if coeff_v.len() != prec {
                    return Err(Error::Parse(format!("every entry needs {prec} coefficients")));
                }
                let mut coeffs = Vec::with_capacity(prec);
                for c in coeff_v {
                    coeffs.push(crate::ring::elem_from_json(&ring, c)?);
                }
                entries.push(TruncatedSeries::new(ring.clone(), coeffs)?);
            }
        }
        SpecialMatrix::new(ring, k, entries)
    }
}

/// Non-commutative determinant by Gauss elimination. For each pivot
/// column i, row r > i is replaced by `row_r - U_ri * U_ii^{-1} * row_i`;
/// the result is the Witt sum of the diagonal classes.
pub fn witt_det(u: &SpecialMatrix, tset: &TruncationSet) -> Result<WittRep> {
    let ring = &u.ring;
    let k = u.size;
    let prec = u.prec;
    let mut m = u.entries.clone();
    for i in 0..k {
        let pivot_inv = SpecialUnit::new(m[i * k + i].clone())?.inv();
        for r in i + 1..k {
            if m[r * k + i].order().is_none() {
                continue;
            }
            let factor = m[r * k + i].mul(pivot_inv.series())?;
            for j in i..k {
                let sub = factor.mul(&m[i * k + j])?;
                m[r * k + j] = m[r * k + j].sub(&sub)?;
            }
        }
    }
    let mut acc = WittRep::neutral(ring.clone(), prec, tset.clone())?;
    for i in 0..k {
        let diag = SpecialUnit::new(m[i * k + i].clone())?;
        acc = acc.add(&WittRep::from_series(&diag, tset.clone())?)?;
    }
    Ok(acc)
}

/// The characteristic element `chi_f = det(I - f t)` of a k x k matrix
/// over the ring.
pub fn chi(ring: &Ring, size: usize, f: &[Elem], tset: &TruncationSet, prec: usize) -> Result<WittRep> {
    let u = SpecialMatrix::one_minus_ft(ring, size, f, prec)?;
    witt_det(&u, tset)
}

/// The map `W(Matrix(k, R)) -> W(R)`: reinterpret the realization (a
/// special unit with matrix coefficients) as a special matrix with series
/// entries and take its determinant. Sends the class of `1 - (r E_11) t^n`
/// to the class of `1 - r t^n`.
pub fn morita_map(w: &WittRep) -> Result<WittRep> {
    let (k, base) = match w.ring() {
        Ring::Matrix(k, base) => (*k, base.as_ref().clone()),
        _ => {
            return Err(Error::Unsupported(
                "morita_map needs a representative over a matrix ring".into(),
            ))
        }
    };
    let u = w.to_series();
    let prec = u.precision();
    let mut entries = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let mut s = TruncatedSeries::zero(&base, prec);
            for d in 0..prec {
                match u.series().coeff(d) {
                    Elem::Matrix(cells) => s.set_coeff(d, cells[i * k + j].clone()),
                    _ => unreachable!("matrix ring elements are matrices"),
                }
            }
            entries.push(s);
        }
    }
    let sm = SpecialMatrix::new(base, k, entries)?;
    witt_det(&sm, w.truncation_set())
}

/// Hattori-Stallings trace of a k x k matrix over the ring: the trace
/// class of the matrix trace.
pub fn hs_trace(ring: &Ring, size: usize, f: &[Elem]) -> Result<TraceClass> {
    if f.len() != size * size {
        return Err(Error::Config(format!("endomorphism needs {0}x{0} entries", size)));
    }
    let mut t = ring.zero();
    for i in 0..size {
        t = ring.add(&t, &f[i * size + i]);
    }
    Ok(trace_class(ring, &t))
}
