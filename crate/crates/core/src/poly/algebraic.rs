//! Real algebraic numbers as a squarefree polynomial plus an isolating interval.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::rational::{self, to_f64, Rational};

/// The unique root of `poly` in the half-open interval (lo, hi].
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraicNumber {
    #[serde(serialize_with = "serialize_poly")]
    poly: UniPoly,
    #[serde(with = "rational::serde_str")]
    lo: Rational,
    #[serde(with = "rational::serde_str")]
    hi: Rational,
}

fn serialize_poly<S: serde::Serializer>(p: &UniPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    let coeffs: Vec<String> = p.coeffs().iter().map(rational::fmt_rational).collect();
    serde::Serialize::serialize(&coeffs, s)
}

impl AlgebraicNumber {
    pub fn new(poly: &UniPoly, lo: Rational, hi: Rational) -> Result<Self> {
        let poly = poly.squarefree().primitive();
        if lo >= hi || poly.count_roots(&lo, &hi)? != 1 {
            return Err(Error::Polynomial(format!("({lo}, {hi}] does not isolate one root of {poly}")));
        }
        if poly.eval(&hi).is_zero() {
            return Ok(Self::rational(hi));
        }
        Ok(AlgebraicNumber { poly, lo, hi })
    }

    pub fn rational(q: Rational) -> Self {
        let poly = UniPoly::linear_root(&q).primitive();
        let lo = &q - Rational::one();
        AlgebraicNumber { poly, lo, hi: q }
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// The exact value when the minimal polynomial is linear.
    pub fn as_rational(&self) -> Option<Rational> {
        (self.poly.degree() == Some(1)).then(|| -self.poly.coeff(0) / self.poly.coeff(1))
    }

    /// Shrinks the isolating interval to width at most 2^-bits.
    pub fn refine(&self, bits: u32) -> Result<Self> {
        let w = Rational::new(BigInt::one(), BigInt::one() << bits);
        let (lo, hi) = self.poly.refine_root(&self.lo, &self.hi, &w)?;
        if lo == hi || self.poly.eval(&hi).is_zero() {
            return Ok(Self::rational(hi));
        }
        Ok(AlgebraicNumber { poly: self.poly.clone(), lo, hi })
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(q) = self.as_rational() {
            return to_f64(&q);
        }
        let r = self.refine(60).unwrap_or_else(|_| self.clone());
        (to_f64(&r.lo) + to_f64(&r.hi)) / 2.0
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo < q && q <= &self.hi
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        if let Some(v) = self.as_rational() {
            return v.cmp(q);
        }
        if q <= &self.lo {
            return Ordering::Greater;
        }
        if q > &self.hi {
            return Ordering::Less;
        }
        if self.poly.eval(q).is_zero() {
            return Ordering::Equal;
        }
        // q is inside (lo, hi] but is not the root: count roots in (lo, q].
        match self.poly.count_roots(&self.lo, q) {
            Ok(1) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "root of {} in ({}, {}] ≈ {:.12}", self.poly, self.lo, self.hi, self.to_f64()),
        }
    }
}
