//! Exact expectations over random assignments of k sample points to the parts of x.
//!
//! A sample lands in part i with probability x_i and in the clique with
//! probability x_0. Two samples are adjacent unless they share a part i ≥ 1.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::PartiteVector;
use crate::error::{Error, Result};
use crate::graph::pair_bit;
use crate::objective::ObjectiveSpec;
use crate::rational::Rational;

/// Largest number of assignments enumerated in one expectation.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

/// Integer weights over the extended support with a common denominator.
#[derive(Clone, Debug)]
pub struct WeightTable {
    pub labels: Vec<usize>,
    pub weights: Vec<u64>,
    pub denom: u64,
}

impl WeightTable {
    pub fn new(x: &PartiteVector) -> Result<Self> {
        let labels = x.support_star();
        let masses: Vec<Rational> = labels.iter().map(|&i| x.mass(i)).collect();
        let mut denom = BigInt::one();
        for m in &masses {
            denom = denom.lcm(m.denom());
        }
        let denom_u = denom
            .to_u64()
            .ok_or_else(|| Error::BoundExceeded(format!("common denominator {denom} exceeds 64 bits")))?;
        let weights = masses
            .iter()
            .map(|m| (m * Rational::from_integer(denom.clone())).to_integer().to_u64().expect("weight fits"))
            .collect();
        Ok(WeightTable { labels, weights, denom: denom_u })
    }

    /// Denominator of a product of `free` weights.
    pub fn denom_power(&self, free: usize) -> BigUint {
        num_traits::pow(BigUint::from(self.denom), free)
    }

    pub fn weight_of(&self, label: usize) -> Option<u64> {
        self.labels.iter().position(|&l| l == label).map(|p| self.weights[p])
    }
}

trait Mass: Clone + Send + Sync {
    fn unit() -> Self;
    fn times(&self, w: u64) -> Self;
    fn add_to(&mut self, other: &Self);
    fn into_big(self) -> BigUint;
}

impl Mass for u128 {
    fn unit() -> Self {
        1
    }
    fn times(&self, w: u64) -> Self {
        self * w as u128
    }
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Mass for BigUint {
    fn unit() -> Self {
        BigUint::one()
    }
    fn times(&self, w: u64) -> Self {
        self * w
    }
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
    fn into_big(self) -> BigUint {
        self
    }
}

/// Sums the product of weights of the free coordinates, grouped by `key(labels)`
/// where `labels` is `fixed` followed by the free coordinates. Divide by
/// `table.denom_power(free)` to get probabilities.
pub fn accumulate<K, F>(table: &WeightTable, fixed: &[usize], free: usize, key: F) -> Result<HashMap<K, BigUint>>
where
    K: Hash + Eq + Send,
    F: Fn(&[usize]) -> K + Sync,
{
    let size = table.labels.len() as u128;
    let count = size.checked_pow(free as u32).unwrap_or(u128::MAX);
    if count > ENUMERATION_LIMIT {
        return Err(Error::BoundExceeded(format!("{size}^{free} assignments exceed {ENUMERATION_LIMIT}")));
    }
    if table.denom_power(free).bits() < 127 {
        Ok(run::<K, F, u128>(table, fixed, free, &key))
    } else {
        Ok(run::<K, F, BigUint>(table, fixed, free, &key))
    }
}

fn run<K, F, M>(table: &WeightTable, fixed: &[usize], free: usize, key: &F) -> HashMap<K, BigUint>
where
    K: Hash + Eq + Send,
    F: Fn(&[usize]) -> K + Sync,
    M: Mass,
{
    let merge = |mut a: HashMap<K, M>, b: HashMap<K, M>| {
        for (k, m) in b {
            match a.get_mut(&k) {
                Some(slot) => slot.add_to(&m),
                None => {
                    a.insert(k, m);
                }
            }
        }
        a
    };
    let out: HashMap<K, M> = if free == 0 {
        let mut h = HashMap::new();
        h.insert(key(fixed), M::unit());
        h
    } else {
        (0..table.labels.len())
            .into_par_iter()
            .map(|first| {
                let mut labels = fixed.to_vec();
                labels.push(table.labels[first]);
                let mut acc = HashMap::new();
                descend(table, &mut labels, fixed.len() + free, M::unit().times(table.weights[first]), key, &mut acc);
                acc
            })
            .reduce(HashMap::new, merge)
    };
    out.into_iter().map(|(k, m)| (k, m.into_big())).collect()
}

fn descend<K, F, M>(table: &WeightTable, labels: &mut Vec<usize>, len: usize, mass: M, key: &F, acc: &mut HashMap<K, M>)
where
    K: Hash + Eq,
    F: Fn(&[usize]) -> K,
    M: Mass,
{
    if labels.len() == len {
        let k = key(labels);
        match acc.get_mut(&k) {
            Some(slot) => slot.add_to(&mass),
            None => {
                acc.insert(k, mass);
            }
        }
        return;
    }
    for (pos, &label) in table.labels.iter().enumerate() {
        labels.push(label);
        descend(table, labels, len, mass.times(table.weights[pos]), key, acc);
        labels.pop();
    }
}

/// Labelled code of the graph on sample points with the given labels.
#[inline]
pub fn code_of_labels(labels: &[usize]) -> u64 {
    let mut code = 0u64;
    for j in 1..labels.len() {
        for i in 0..j {
            if labels[i] != labels[j] || labels[i] == 0 {
                code |= 1 << pair_bit(i, j);
            }
        }
    }
    code
}

/// Σ γ(code) · mass / denom.
pub fn expectation(spec: &ObjectiveSpec, masses: &HashMap<u64, BigUint>, denom: &BigUint) -> Rational {
    let mut total = Rational::zero();
    for (&code, m) in masses {
        let g = spec.gamma_of_code(code);
        if !g.is_zero() {
            total += g * Rational::from_integer(BigInt::from(m.clone()));
        }
    }
    total / Rational::from_integer(BigInt::from(denom.clone()))
}

/// λ(x) = E γ(pattern of k random samples).
pub fn lambda_of_vector(spec: &ObjectiveSpec, x: &PartiteVector) -> Result<Rational> {
    let table = WeightTable::new(x)?;
    let k = spec.k();
    let masses = accumulate(&table, &[], k, code_of_labels)?;
    Ok(expectation(spec, &masses, &table.denom_power(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::shape::CompletePartiteShape;
    use crate::partite::symmetric::density_formula;
    use crate::rational::rat;

    fn kp(sizes: &[usize]) -> ObjectiveSpec {
        ObjectiveSpec::induced_density(CompletePartiteShape::new(sizes.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn known_constants() {
        assert_eq!(lambda_of_vector(&kp(&[2, 1, 1, 1]), &PartiteVector::uniform(8)).unwrap(), rat(525, 1024));
        let x = PartiteVector::new(vec![rat(3, 5)]).unwrap();
        assert_eq!(lambda_of_vector(&kp(&[3, 1, 1]), &x).unwrap(), rat(216, 625));
        let one = PartiteVector::uniform(1);
        assert_eq!(lambda_of_vector(&kp(&[4]), &one).unwrap(), rat(1, 1));
    }

    #[test]
    fn agrees_with_closed_form() {
        let x = PartiteVector::new(vec![rat(1, 3), rat(1, 4), rat(1, 6)]).unwrap();
        for a in crate::partitions::partitions(5) {
            assert_eq!(lambda_of_vector(&kp(&a), &x).unwrap(), density_formula(&a, &x).unwrap(), "{a:?}");
        }
    }

    #[test]
    fn enumeration_bound() {
        assert!(lambda_of_vector(&kp(&[2, 2, 2, 2]), &PartiteVector::uniform(10)).is_err());
    }
}
