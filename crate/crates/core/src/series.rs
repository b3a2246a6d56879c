//! Truncated power series over a ring, and the group of special units.
//!
//! All arithmetic happens modulo `t^N`; a binary operation on operands of
//! different precision truncates to the smaller one. Coefficients may be
//! non-commutative, so the order of factors is respected everywhere.

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

use num_bigint::BigInt;

/// A power series truncated at `t^N` where `N = coeffs.len() >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    ring: Ring,
    coeffs: Vec<Elem>,
}

impl TruncatedSeries {
    pub fn new(ring: Ring, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Config(format!(
                "series precision must be at least 2, got {}",
                coeffs.len()
            )));
        }
        Ok(TruncatedSeries { ring, coeffs })
    }

    /// The constant series 1 at the given precision.
    pub fn one(ring: &Ring, prec: usize) -> Self {
        let mut coeffs = vec![ring.zero(); prec];
        coeffs[0] = ring.one();
        TruncatedSeries { ring: ring.clone(), coeffs }
    }

    pub fn zero(ring: &Ring, prec: usize) -> Self {
        TruncatedSeries { ring: ring.clone(), coeffs: vec![ring.zero(); prec] }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &Elem {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, e: Elem) {
        self.coeffs[i] = e;
    }

    pub fn is_one(&self) -> bool {
        self.ring.is_one(&self.coeffs[0])
            && self.coeffs[1..].iter().all(|c| self.ring.is_zero(c))
    }

    /// Index of the first nonzero coefficient, or `None` for the zero
    /// series. Special units of filtration `>= n` look like `1 + a t^n + ...`.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.ring.is_zero(c))
    }

    pub fn truncate(&self, prec: usize) -> TruncatedSeries {
        let prec = prec.min(self.coeffs.len());
        TruncatedSeries { ring: self.ring.clone(), coeffs: self.coeffs[..prec].to_vec() }
    }

    fn check_ring(&self, other: &TruncatedSeries) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::Mismatch("series live over different rings".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_ring(other)?;
        let prec = self.precision().min(other.precision());
        let coeffs = (0..prec)
            .map(|i| self.ring.add(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        Ok(TruncatedSeries { ring: self.ring.clone(), coeffs })
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.add(&other.neg())
    }

    /// Cauchy product, truncated at the minimum precision of the factors.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check_ring(other)?;
        let prec = self.precision().min(other.precision());
        let ring = &self.ring;
        let mut coeffs = vec![ring.zero(); prec];
        for i in 0..prec {
            if ring.is_zero(&self.coeffs[i]) {
                continue;
            }
            for j in 0..prec - i {
                if ring.is_zero(&other.coeffs[j]) {
                    continue;
                }
                let p = ring.mul(&self.coeffs[i], &other.coeffs[j]);
                coeffs[i + j] = ring.add(&coeffs[i + j], &p);
            }
        }
        Ok(TruncatedSeries { ring: ring.clone(), coeffs })
    }

    /// The operator `t d/dt`: coefficient `c_n` becomes `n * c_n`. This is
    /// the degree-weighting that makes the logarithmic derivative integral.
    pub fn t_weighted_derivative(&self) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| self.ring.int_scale(&BigInt::from(n), c))
            .collect();
        TruncatedSeries { ring: self.ring.clone(), coeffs }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ring": crate::ring::ring_to_json(&self.ring),
            "N": self.precision(),
            "coeffs": self
                .coeffs
                .iter()
                .map(|c| crate::ring::elem_to_json(&self.ring, c))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<TruncatedSeries> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("series must be an object".into()))?;
        let ring = crate::ring::ring_from_json(
            obj.get("ring").ok_or_else(|| Error::Parse("missing `ring`".into()))?,
        )?;
        let prec = obj
            .get("N")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer `N`".into()))? as usize;
        let coeff_v = obj
            .get("coeffs")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| Error::Parse("missing list `coeffs`".into()))?;
        if coeff_v.len() != prec {
            return Err(Error::Parse(format!(
                "expected {prec} coefficients, got {}",
                coeff_v.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(prec);
        for c in coeff_v {
            coeffs.push(crate::ring::elem_from_json(&ring, c)?);
        }
        TruncatedSeries::new(ring, coeffs)
    }
}

/// A truncated series with constant coefficient 1. Special units are
/// closed under multiplication and two-sided inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialUnit(TruncatedSeries);

impl SpecialUnit {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        if !series.ring.is_one(&series.coeffs[0]) {
            return Err(Error::Unsupported(
                "not a special unit: constant term is not 1".into(),
            ));
        }
        Ok(SpecialUnit(series))
    }

    pub fn one(ring: &Ring, prec: usize) -> Self {
        SpecialUnit(TruncatedSeries::one(ring, prec))
    }

    /// The Teichmueller-style factor `1 - a t^n`.
    pub fn teichmuller(ring: &Ring, a: &Elem, n: usize, prec: usize) -> Result<Self> {
        if n == 0 || n >= prec {
            return Err(Error::Config(format!(
                "factor index {n} out of range for precision {prec}"
            )));
        }
        let mut s = TruncatedSeries::one(ring, prec);
        s.coeffs[n] = ring.neg(a);
        Ok(SpecialUnit(s))
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.0
    }

    pub fn into_series(self) -> TruncatedSeries {
        self.0
    }

    pub fn ring(&self) -> &Ring {
        self.0.ring()
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    pub fn mul(&self, other: &SpecialUnit) -> Result<SpecialUnit> {
        Ok(SpecialUnit(self.0.mul(&other.0)?))
    }

    pub fn truncate(&self, prec: usize) -> SpecialUnit {
        SpecialUnit(self.0.truncate(prec))
    }

    /// Two-sided inverse modulo `t^N`, by the direct recursion
    /// `v_n = -sum_{i=1..n} u_i v_{n-i}` with `v_0 = 1`.
    pub fn inv(&self) -> SpecialUnit {
        let ring = self.0.ring();
        let prec = self.0.precision();
        let mut v = vec![ring.zero(); prec];
        v[0] = ring.one();
        for n in 1..prec {
            let mut acc = ring.zero();
            for i in 1..=n {
                if ring.is_zero(&self.0.coeffs[i]) {
                    continue;
                }
                acc = ring.add(&acc, &ring.mul(&self.0.coeffs[i], &v[n - i]));
            }
            v[n] = ring.neg(&acc);
        }
        SpecialUnit(TruncatedSeries { ring: ring.clone(), coeffs: v })
    }
}
