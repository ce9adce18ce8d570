//! Exact rational helpers and `"p/q"` string serialisation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n/d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_biguint(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.272"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::BadRational(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let w: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(w * &scale + f, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// `"p/q"`, or `"p"` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators and denominators: scale both down first.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact value of a finite float.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `n (n-1) ... (n-r+1)`.
pub fn falling(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    (0..r).fold(BigUint::one(), |acc, i| acc * (n - i))
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Largest rational with denominator at most `max_den` that is `<= x`,
/// among the continued-fraction convergents and semiconvergents of `x`.
pub fn best_lower_approximation(x: &Rational, max_den: &BigInt) -> Rational {
    let floor = x.floor();
    let mut best = floor.clone();
    // Stern-Brocot descent between floor and floor+1.
    let (mut ln, mut ld): (BigInt, BigInt) = (floor.to_integer(), BigInt::one());
    let (mut hn, mut hd): (BigInt, BigInt) = (floor.to_integer() + 1, BigInt::one());
    loop {
        let mn = &ln + &hn;
        let md = &ld + &hd;
        if &md > max_den {
            break;
        }
        let m = Rational::new(mn.clone(), md.clone());
        if &m <= x {
            best = m;
            ln = mn;
            ld = md;
        } else {
            hn = mn;
            hd = md;
        }
        if best == *x {
            break;
        }
    }
    best
}

/// Simplest rational (smallest denominator, then numerator) in [lo, hi].
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Rational nearest to `x` with denominator at most `max_den`.
pub fn nearest_small_fraction(x: f64, max_den: i64) -> Rational {
    let mut best = int(x.round() as i64);
    let mut err = (x - x.round()).abs();
    for d in 1..=max_den {
        let n = (x * d as f64).round() as i64;
        let e = (x - n as f64 / d as f64).abs();
        if e < err - 1e-15 {
            err = e;
            best = rat(n, d);
        }
    }
    best
}

pub mod serde_str {
    //! Serialise a rational as a `"p/q"` string.
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_str_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&fmt_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_str_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let v = Option::<String>::deserialize(d)?;
        v.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("3/8").unwrap(), rat(3, 8));
        assert_eq!(parse_rational("-2").unwrap(), int(-2));
        assert_eq!(parse_rational("0.272").unwrap(), rat(272, 1000));
        assert_eq!(parse_rational("-.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 4), BigUint::from(15u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(falling(5, 2), BigUint::from(20u32));
        assert_eq!(factorial(5), BigUint::from(120u32));
    }

    #[test]
    fn lower_approximation() {
        let x = rat(108, 125) + rat(1, 1_000_000_000);
        assert_eq!(best_lower_approximation(&x, &BigInt::from(200)), rat(108, 125));
        assert_eq!(nearest_small_fraction(0.375000001, 64), rat(3, 8));
    }

    #[test]
    fn simplest_in_interval() {
        assert_eq!(simplest_between(&rat(8, 25), &rat(9, 25)), rat(1, 3));
        assert_eq!(simplest_between(&rat(108, 125), &(rat(108, 125) + rat(1, 1 << 30))), rat(108, 125));
        assert_eq!(simplest_between(&rat(-7, 4), &rat(-3, 2)), rat(-3, 2));
        assert_eq!(simplest_between(&rat(1, 2), &rat(3, 2)), int(1));
    }
}
