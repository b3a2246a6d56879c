//! Exact computer algebra for truncated big Witt vectors of
//! non-commutative rings.
//!
//! The crate is organized around a small tower:
//!
//! * [`ring`] — pluggable exact rings with a computable trace-class
//!   quotient R/[R,R];
//! * [`series`] — truncated power series and special units over a ring;
//! * [`witt`] — Witt vector representatives over truncation sets, the
//!   ghost map, and the Verschiebung/Frobenius/star/restriction operators;
//! * [`bimod`] — the coefficient tier at matrix-bimodule scope, with the
//!   cyclic-rotation trace isomorphism;
//! * [`charpoly`] — non-commutative determinants by Gauss elimination
//!   over truncated series, characteristic elements, and the Morita map;
//! * [`oracle`] — brute-force ground truth: literal enumeration of the
//!   Witt group for finite rings, classical determinants and ghost
//!   polynomials.
//!
//! Everything is exact; no floating point is used anywhere.

pub mod bimod;
pub mod charpoly;
pub mod error;
pub mod oracle;
pub mod ring;
pub mod series;
pub mod witt;

pub use error::{Error, Result};
pub use ring::{Elem, Ring, TraceClass};
pub use series::{SpecialUnit, TruncatedSeries};
pub use witt::{GhostVector, TruncationSet, Verdict, WittRep};
