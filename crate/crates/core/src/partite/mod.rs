//! Limits of complete partite graphs: non-increasing part masses plus a clique mass.

pub mod edit;
pub mod engine;
pub mod realise;
pub mod symmetric;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, to_f64, Rational};

/// A point of the partite limit space with finite support.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartiteVector {
    parts: Vec<Rational>,
    x0: Rational,
}

impl PartiteVector {
    /// Validates that parts are positive, non-increasing and sum to at most 1.
    pub fn new(parts: Vec<Rational>) -> Result<Self> {
        if let Some(p) = parts.iter().find(|p| !p.is_positive()) {
            return Err(Error::InvalidVector(format!("part {p} is not positive")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidVector("parts are not non-increasing".into()));
        }
        let total: Rational = parts.iter().sum();
        if total > Rational::one() {
            return Err(Error::InvalidVector(format!("parts sum to {total} > 1")));
        }
        Ok(PartiteVector { x0: Rational::one() - total, parts })
    }

    /// Sorts, drops zeros, then validates.
    pub fn from_unsorted(mut parts: Vec<Rational>) -> Result<Self> {
        parts.retain(|p| !p.is_zero());
        parts.sort_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    /// The zero vector: everything is clique.
    pub fn zero() -> Self {
        PartiteVector { parts: Vec::new(), x0: Rational::one() }
    }

    /// `r` equal parts of mass `1/r`.
    pub fn uniform(r: usize) -> Self {
        let p = Rational::new(1.into(), (r as i64).into());
        Self::new(vec![p; r]).expect("uniform vector")
    }

    pub fn parts(&self) -> &[Rational] {
        &self.parts
    }

    pub fn x0(&self) -> &Rational {
        &self.x0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Mass at index `i`: the clique mass for 0, part `i` otherwise.
    pub fn mass(&self, i: usize) -> Rational {
        match i {
            0 => self.x0.clone(),
            i if i <= self.parts.len() => self.parts[i - 1].clone(),
            _ => Rational::zero(),
        }
    }

    /// Part indices `1..=m`.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.parts.len()).collect()
    }

    /// Part indices plus 0 when the clique mass is positive.
    pub fn support_star(&self) -> Vec<usize> {
        let mut s = Vec::with_capacity(self.parts.len() + 1);
        if self.x0.is_positive() {
            s.push(0);
        }
        s.extend(1..=self.parts.len());
        s
    }

    pub fn in_support_star(&self, i: usize) -> bool {
        (i == 0 && self.x0.is_positive()) || (1..=self.parts.len()).contains(&i)
    }

    /// Smallest entry over the extended support.
    pub fn min_entry(&self) -> Rational {
        self.support_star().into_iter().map(|i| self.mass(i)).min().unwrap_or_else(Rational::zero)
    }

    /// Σ x_i², the squared Euclidean norm of the parts.
    pub fn norm2_squared(&self) -> Rational {
        self.parts.iter().map(|p| p * p).sum()
    }

    /// ℓ1 distance between part sequences (padded with zeros).
    pub fn l1_distance(&self, other: &PartiteVector) -> Rational {
        let m = self.len().max(other.len());
        (1..=m).map(|i| (self.mass(i) - other.mass(i)).abs()).sum()
    }

    /// The first `m` parts (the rest moves to the clique).
    pub fn truncate(&self, m: usize) -> PartiteVector {
        Self::new(self.parts.iter().take(m).cloned().collect()).expect("prefix of a valid vector")
    }

    pub fn parts_f64(&self) -> Vec<f64> {
        self.parts.iter().map(to_f64).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("vector serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Debug for PartiteVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PartiteVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "(x0={}; {})", self.x0, parts.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct VectorJson {
    x0: String,
    parts: Vec<String>,
}

impl Serialize for PartiteVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VectorJson { x0: self.x0.to_string(), parts: self.parts.iter().map(|p| p.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartiteVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = VectorJson::deserialize(d)?;
        let parts = raw.parts.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>>>().map_err(D::Error::custom)?;
        let x0 = parse_rational(&raw.x0).map_err(D::Error::custom)?;
        let v = PartiteVector::new(parts).map_err(D::Error::custom)?;
        if v.x0 != x0 {
            return Err(D::Error::custom(format!("x0 = {x0} but parts leave {}", v.x0)));
        }
        Ok(v)
    }
}

impl FromStr for PartiteVector {
    type Err = Error;

    /// JSON form, or a comma-separated list of parts such as `1/2,1/2`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            return Self::from_json(t);
        }
        if t.is_empty() || t == "0" {
            return Ok(Self::zero());
        }
        Self::new(t.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?)
    }
}

/// Attachment pattern (b, α): which parts the new vertex joins and the fraction
/// of the clique it is adjacent to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachmentPattern {
    pub b: Vec<bool>,
    #[serde(with = "crate::rational::serde_str")]
    pub alpha: Rational,
}

impl AttachmentPattern {
    /// Checks the pattern against `x`; α is forced to 1 when `x` has no clique mass.
    pub fn new(x: &PartiteVector, b: Vec<bool>, alpha: Rational) -> Result<Self> {
        if b.len() != x.len() {
            return Err(Error::InvalidVector(format!("pattern has {} entries for {} parts", b.len(), x.len())));
        }
        if alpha.is_negative() || alpha > Rational::one() {
            return Err(Error::InvalidVector(format!("alpha {alpha} outside [0,1]")));
        }
        let alpha = if x.x0().is_zero() { Rational::one() } else { alpha };
        Ok(AttachmentPattern { b, alpha })
    }

    /// Clone of part `i`; `i = 0` clones a clique vertex.
    pub fn clone_of(x: &PartiteVector, i: usize) -> Result<Self> {
        if !x.in_support_star(i) {
            return Err(Error::IndexOutsideSupport(i));
        }
        let b = (1..=x.len()).map(|j| j != i).collect();
        Ok(AttachmentPattern { b, alpha: Rational::one() })
    }

    /// The part index this pattern clones, if any.
    pub fn cloned_index(&self, x: &PartiteVector) -> Option<usize> {
        if !self.alpha.is_one() && x.x0().is_positive() {
            return None;
        }
        let missing: Vec<usize> = (1..=self.b.len()).filter(|&j| !self.b[j - 1]).collect();
        match missing.as_slice() {
            [] if x.x0().is_positive() => Some(0),
            [i] => Some(*i),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn json_round_trip_and_validation() {
        let v = PartiteVector::new(vec![rat(3, 5)]).unwrap();
        assert_eq!(v.to_json(), r#"{"x0":"2/5","parts":["3/5"]}"#);
        assert_eq!(PartiteVector::from_json(&v.to_json()).unwrap(), v);
        assert!(PartiteVector::from_json(r#"{"x0":"0","parts":["1/4","3/4"]}"#).is_err());
        assert!(PartiteVector::from_json(r#"{"x0":"1/2","parts":["1/4"]}"#).is_err());
        assert!(PartiteVector::new(vec![rat(2, 3), rat(2, 3)]).is_err());
        assert_eq!(v.support_star(), vec![0, 1]);
        assert_eq!(PartiteVector::uniform(2).support_star(), vec![1, 2]);
    }

    #[test]
    fn clone_patterns() {
        let x = PartiteVector::new(vec![rat(1, 2), rat(1, 4)]).unwrap();
        let p = AttachmentPattern::clone_of(&x, 2).unwrap();
        assert_eq!(p.b, vec![true, false]);
        assert_eq!(p.cloned_index(&x), Some(2));
        assert_eq!(AttachmentPattern::clone_of(&x, 0).unwrap().cloned_index(&x), Some(0));
        assert!(AttachmentPattern::clone_of(&x, 3).is_err());
    }
}
