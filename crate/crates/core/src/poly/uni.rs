//! Univariate polynomials over the rationals with Sturm-sequence root counting.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

/// Coefficients from the constant term upwards, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn monomial(degree: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `x - a`.
    pub fn linear_root(a: &Rational) -> Self {
        Self::new(vec![-a.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// self − c·other.
    pub fn sub_scaled(&self, other: &UniPoly, c: &Rational) -> UniPoly {
        self - &other.scale(c)
    }

    /// The polynomial of least degree through the given points (distinct abscissae).
    pub fn interpolate(points: &[(Rational, Rational)]) -> UniPoly {
        let mut out = UniPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = UniPoly::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let factor = UniPoly::new(vec![-xj.clone(), Rational::one()]);
                    basis = (&basis * &factor).scale(&(xi - xj).recip());
                }
            }
            out = &out + &basis;
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&(Rational::one() / l))
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d.degree().ok_or_else(|| Error::Polynomial("division by zero polynomial".into()))?;
        let mut rem = self.coeffs.clone();
        let lead = d.lead();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient, failing unless the division is exact.
    pub fn div_exact(&self, d: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Polynomial("division is not exact".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, p: &UniPoly) -> bool {
        p.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Same roots, all simple.
    pub fn squarefree(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Yun's decomposition: `factors[i]` has the roots of multiplicity `i + 1`.
    pub fn squarefree_decomposition(&self) -> Vec<UniPoly> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.div_exact(&a0).expect("gcd divides");
        let mut c = d.div_exact(&a0).expect("gcd divides");
        let mut dd = &c - &b.derivative();
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&dd);
            b = b.div_exact(&a).expect("gcd divides");
            c = dd.div_exact(&a).expect("gcd divides");
            dd = &c - &b.derivative();
            out.push(a);
        }
        out
    }

    /// Product of the factors whose roots have odd multiplicity.
    pub fn odd_part(&self) -> UniPoly {
        self.squarefree_decomposition()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 0)
            .fold(UniPoly::one(), |acc, (_, f)| &acc * &f)
    }

    /// p(q(x)).
    pub fn compose(&self, q: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// p(x + a).
    pub fn shift(&self, a: &Rational) -> UniPoly {
        self.compose(&UniPoly::new(vec![a.clone(), Rational::one()]))
    }

    /// Integer multiple with coprime integer coefficients and positive leading term.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for i in &ints {
            g = g.gcd(i);
        }
        if self.lead().is_negative() {
            g = -g;
        }
        UniPoly::new(ints.into_iter().map(|i| Rational::from_integer(i / &g)).collect())
    }

    /// Sturm sequence of the squarefree part.
    pub fn sturm_sequence(&self) -> Result<Vec<UniPoly>> {
        if self.is_zero() {
            return Err(Error::Polynomial("Sturm sequence of the zero polynomial".into()));
        }
        let p = self.squarefree();
        let mut seq = vec![p.clone(), p.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1])?;
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        Ok(seq)
    }

    /// Distinct real roots in (lo, hi].
    pub fn count_roots(&self, lo: &Rational, hi: &Rational) -> Result<usize> {
        if lo >= hi {
            return Err(Error::Polynomial(format!("empty interval ({lo}, {hi}]")));
        }
        let seq = self.sturm_sequence()?;
        let a = sign_changes(seq.iter().map(|p| p.eval(lo)));
        let b = sign_changes(seq.iter().map(|p| p.eval(hi)));
        Ok(a - b)
    }

    /// Distinct real roots in the open interval (lo, hi).
    pub fn count_roots_open(&self, lo: &Rational, hi: &Rational) -> Result<usize> {
        let c = self.count_roots(lo, hi)?;
        Ok(c - usize::from(self.eval(hi).is_zero()))
    }

    /// Distinct real roots.
    pub fn count_real_roots(&self) -> Result<usize> {
        let seq = self.sturm_sequence()?;
        let at_neg = sign_changes(seq.iter().map(|p| {
            let d = p.degree().unwrap_or(0);
            if d % 2 == 0 { p.lead() } else { -p.lead() }
        }));
        let at_pos = sign_changes(seq.iter().map(|p| p.lead()));
        Ok(at_neg - at_pos)
    }

    /// Disjoint intervals (a, b], each holding exactly one root in (lo, hi].
    pub fn isolate_roots(&self, lo: &Rational, hi: &Rational) -> Result<Vec<(Rational, Rational)>> {
        let p = self.squarefree();
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone(), p.count_roots(lo, hi)?)];
        while let Some((a, b, n)) = stack.pop() {
            match n {
                0 => {}
                1 => out.push((a, b)),
                _ => {
                    let m = (&a + &b) / Rational::from_integer(2.into());
                    let left = p.count_roots(&a, &m)?;
                    stack.push((m.clone(), b, n - left));
                    stack.push((a, m, left));
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Bisects an isolating interval (a, b] until its width is at most `width`.
    pub fn refine_root(&self, a: &Rational, b: &Rational, width: &Rational) -> Result<(Rational, Rational)> {
        let p = self.squarefree();
        let (mut a, mut b) = (a.clone(), b.clone());
        if p.count_roots(&a, &b)? != 1 {
            return Err(Error::Polynomial("interval does not isolate a single root".into()));
        }
        let two = Rational::from_integer(2.into());
        while &b - &a > *width {
            let m = (&a + &b) / &two;
            if p.eval(&m).is_zero() {
                return Ok((m.clone(), m));
            }
            if p.count_roots(&a, &m)? == 1 {
                b = m;
            } else {
                a = m;
            }
        }
        Ok((a, b))
    }

    /// p > 0 on the closed interval [lo, hi].
    pub fn positive_on(&self, lo: &Rational, hi: &Rational) -> Result<bool> {
        if self.is_zero() {
            return Ok(false);
        }
        if !self.eval(lo).is_positive() || !self.eval(hi).is_positive() {
            return Ok(false);
        }
        if lo == hi {
            return Ok(true);
        }
        Ok(self.count_roots(lo, hi)? == 0)
    }

    /// p ≥ 0 on [lo, hi], allowing roots of even multiplicity inside.
    pub fn nonnegative_on(&self, lo: &Rational, hi: &Rational) -> Result<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        if self.eval(lo).is_negative() || self.eval(hi).is_negative() {
            return Ok(false);
        }
        if lo >= hi {
            return Ok(true);
        }
        // Sign changes happen only at roots of odd multiplicity.
        let odd = self.odd_part();
        if odd.degree().unwrap_or(0) > 0 && odd.count_roots_open(lo, hi)? > 0 {
            return Ok(false);
        }
        let width = hi - lo;
        let mut den = 2i64;
        loop {
            for j in 1..den {
                let m = lo + &width * Rational::new(j.into(), den.into());
                let v = self.eval(&m);
                if !v.is_zero() {
                    return Ok(v.is_positive());
                }
            }
            den *= 2;
        }
    }

    /// p ≤ 0 on [lo, hi].
    pub fn nonpositive_on(&self, lo: &Rational, hi: &Rational) -> Result<bool> {
        (-self).nonnegative_on(lo, hi)
    }

    /// Approximate real roots in (lo, hi] as floats (midpoints of refined intervals).
    pub fn real_roots_f64(&self, lo: &Rational, hi: &Rational) -> Result<Vec<f64>> {
        let w = Rational::new(1.into(), BigInt::from(1u64) << 60);
        self.isolate_roots(lo, hi)?
            .iter()
            .map(|(a, b)| {
                let (a, b) = self.refine_root(a, b, &w)?;
                Ok((to_f64(&a) + to_f64(&b)) / 2.0)
            })
            .collect()
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or_else(|| to_f64(c))).collect()
    }
}

fn sign_changes(values: impl Iterator<Item = Rational>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for v in values {
        let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, o: UniPoly) -> UniPoly {
        &self + &o
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, o: UniPoly) -> UniPoly {
        &self - &o
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, o: UniPoly) -> UniPoly {
        &self * &o
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn interpolation_recovers_cubic() {
        let p = UniPoly::from_ints(&[3, -1, 0, 2]);
        let points: Vec<_> = (0..4).map(|i| (int(i), p.eval(&int(i)))).collect();
        assert_eq!(UniPoly::interpolate(&points), p);
    }

    #[test]
    fn sturm_counts() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        assert_eq!(p.count_roots(&int(0), &int(2)).unwrap(), 1);
        assert_eq!(p.count_real_roots().unwrap(), 2);
        let q1 = UniPoly::from_ints(&[0, -216, 625]);
        assert_eq!(q1.count_roots(&int(0), &int(1)).unwrap(), 1);
        let h = UniPoly::from_ints(&[-1, 4, 0, -4, 1]);
        assert_eq!(h.count_roots_open(&int(0), &int(1)).unwrap(), 1);
        assert_eq!(h.count_roots(&int(0), &int(1)).unwrap(), 2);
        assert!(UniPoly::zero().count_roots(&int(0), &int(1)).is_err());
    }

    #[test]
    fn decomposition_and_signs() {
        // (x - 1/3)^2 (x - 2) * 3
        let a = UniPoly::linear_root(&rat(1, 3));
        let b = UniPoly::linear_root(&int(2));
        let p = (&(&a * &a) * &b).scale(&int(3));
        let parts = p.squarefree_decomposition();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[1], a);
        assert_eq!(p.odd_part(), b);
        assert!(p.nonpositive_on(&int(0), &int(2)).unwrap());
        assert!(!p.nonpositive_on(&int(0), &int(3)).unwrap());
        assert!(!p.positive_on(&int(0), &int(1)).unwrap());
        assert_eq!(p.primitive(), UniPoly::from_ints(&[-2, 13, -24, 9]));
    }

    #[test]
    fn isolation_and_shift() {
        let h = UniPoly::from_ints(&[-1, 4, 0, -4, 1]);
        let roots = h.isolate_roots(&int(-2), &int(4)).unwrap();
        assert_eq!(roots.len(), 4);
        let p = UniPoly::from_ints(&[1, 2, 1]);
        assert_eq!(p.shift(&int(-1)), UniPoly::from_ints(&[0, 0, 1]));
        let (q, r) = p.div_rem(&UniPoly::from_ints(&[1, 1])).unwrap();
        assert_eq!(q, UniPoly::from_ints(&[1, 1]));
        assert!(r.is_zero());
    }
}
