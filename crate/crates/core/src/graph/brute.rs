//! Exhaustive oracles over all labelled graphs on few vertices.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::canon::{canonical_key_of_code, CanonicalKey};
use super::{pair_bit, pair_count, Graph, Subsets};
use crate::error::{Error, Result};
use crate::objective::ObjectiveSpec;
use crate::rational::{binomial, from_biguint, Rational};

pub const BRUTE_MAX_ORDER: usize = 7;

/// λ(n) over all graphs on n vertices with every extremal class.
#[derive(Clone, Debug)]
pub struct BruteMaximum {
    pub value: Rational,
    pub witnesses: Vec<Graph>,
}

pub fn brute_lambda_max(spec: &ObjectiveSpec, n: usize) -> Result<BruteMaximum> {
    let k = spec.k();
    if n > BRUTE_MAX_ORDER {
        return Err(Error::TooManyVertices { n, limit: BRUTE_MAX_ORDER });
    }
    if n < k {
        return Err(Error::TooFewVertices { n, k });
    }
    // For every k-set, the bit positions of its pairs in the n-vertex code,
    // listed in the order of the k-vertex code.
    let gathers: Vec<Vec<usize>> = Subsets::new(n, k)
        .map(|s| {
            let mut bits = vec![0; pair_count(k)];
            for j in 1..k {
                for i in 0..j {
                    bits[pair_bit(i, j)] = pair_bit(s[i], s[j]);
                }
            }
            bits
        })
        .collect();
    let gamma = IntegerGamma::new(spec)?;
    let codes = 1u64 << pair_count(n);
    let chunk = 1u64 << 12;
    let (best, keys) = (0..codes.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut best = i128::MIN;
            let mut keys = BTreeSet::new();
            for code in c * chunk..((c + 1) * chunk).min(codes) {
                let mut total = 0i128;
                for bits in &gathers {
                    let mut sub = 0u64;
                    for (t, &b) in bits.iter().enumerate() {
                        sub |= (code >> b & 1) << t;
                    }
                    total += gamma.value(sub);
                }
                if total > best {
                    best = total;
                    keys.clear();
                }
                if total == best {
                    keys.insert(canonical_key_of_code(n, code));
                }
            }
            (best, keys)
        })
        .reduce(
            || (i128::MIN, BTreeSet::new()),
            |a, b| match a.0.cmp(&b.0) {
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Equal => (a.0, a.1.union(&b.1).copied().collect()),
            },
        );
    let subsets = from_biguint(binomial(n as u64, k as u64));
    let value = Rational::new(BigInt::from(best), gamma.scale) / subsets;
    Ok(BruteMaximum { value, witnesses: keys.iter().map(CanonicalKey::graph).collect() })
}

/// γ scaled to integers, indexed by labelled k-vertex code.
struct IntegerGamma {
    values: Vec<i128>,
    scale: BigInt,
}

impl IntegerGamma {
    fn new(spec: &ObjectiveSpec) -> Result<Self> {
        let k = spec.k();
        let (values, scale) = match spec.dense() {
            Some(d) => (
                d.scaled.clone().ok_or_else(|| Error::BoundExceeded("γ too large for integer scaling".into()))?,
                d.scale.clone(),
            ),
            None => {
                let raw: Vec<Rational> = (0..1u64 << pair_count(k)).map(|c| spec.gamma_of_code(c)).collect();
                let scale = crate::rational::lcm_of_denominators(raw.iter());
                let values = raw
                    .iter()
                    .map(|v| {
                        let s = (v * Rational::from_integer(scale.clone())).to_integer();
                        i128::try_from(s).map_err(|_| Error::BoundExceeded("γ too large for integer scaling".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                (values, scale)
            }
        };
        if scale.is_zero() {
            return Err(Error::InvalidObjective("zero scale".into()));
        }
        Ok(IntegerGamma { values, scale })
    }

    #[inline]
    fn value(&self, code: u64) -> i128 {
        self.values[code as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::shape::{complete_partite_shape_of, CompletePartiteShape};
    use crate::rational::rat;

    fn kp(sizes: &[usize]) -> ObjectiveSpec {
        ObjectiveSpec::induced_density(CompletePartiteShape::new(sizes.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn independent_sets_favour_the_empty_graph() {
        let m = brute_lambda_max(&kp(&[3]), 5).unwrap();
        assert_eq!(m.value, rat(1, 1));
        assert_eq!(m.witnesses, vec![Graph::empty(5).unwrap()]);
    }

    #[test]
    fn c4_maximised_by_k33() {
        let m = brute_lambda_max(&kp(&[2, 2]), 6).unwrap();
        let k33 = complete_partite_shape_of(&Graph::complete_partite(&[3, 3]).unwrap()).unwrap();
        assert!(m.witnesses.iter().any(|w| complete_partite_shape_of(w).as_ref() == Some(&k33)));
        assert_eq!(m.value, rat(9, 15));
    }

    #[test]
    fn cherry_has_partite_witness() {
        let m = brute_lambda_max(&kp(&[2, 1]), 6).unwrap();
        assert!(m.witnesses.iter().any(|w| complete_partite_shape_of(w).is_some()));
        assert!(brute_lambda_max(&kp(&[2, 1]), 8).is_err());
    }
}
