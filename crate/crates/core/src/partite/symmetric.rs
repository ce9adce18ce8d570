//! Elementary symmetric sums and closed-form complete partite densities.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};

use super::PartiteVector;
use crate::error::{Error, Result};
use crate::graph::shape::CompletePartiteShape;
use crate::objective::ObjectiveSpec;
use crate::partitions::multiplicities;
use crate::rational::{binomial, factorial, falling, from_biguint, Rational};

/// Exponent tuple (d_1, ..., d_t) and a set of excluded indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymmetricIndex {
    pub exponents: Vec<u32>,
    pub excluded: BTreeSet<usize>,
}

impl SymmetricIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        SymmetricIndex { exponents, excluded: BTreeSet::new() }
    }

    pub fn excluding(mut self, indices: impl IntoIterator<Item = usize>) -> Self {
        self.excluded.extend(indices);
        self
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// Σ over distinct indices i_1, ..., i_t outside the excluded set of Π x_{i_j}^{d_j}.
pub fn elementary_symmetric(x: &PartiteVector, idx: &SymmetricIndex) -> Rational {
    let t = idx.exponents.len();
    if t > 20 {
        return Rational::zero();
    }
    let mut dp = vec![Rational::zero(); 1 << t];
    dp[0] = Rational::one();
    for (pos, xi) in x.parts().iter().enumerate() {
        if idx.excluded.contains(&(pos + 1)) {
            continue;
        }
        let powers: Vec<Rational> = idx.exponents.iter().map(|&d| Pow::pow(xi, d)).collect();
        for mask in (0..1usize << t).rev() {
            if dp[mask].is_zero() {
                continue;
            }
            for (j, pw) in powers.iter().enumerate() {
                if mask >> j & 1 == 0 {
                    let add = &dp[mask] * pw;
                    dp[mask | 1 << j] += add;
                }
            }
        }
    }
    dp.pop().unwrap_or_else(Rational::zero)
}

fn validate_partition(a: &[usize]) -> Result<()> {
    if a.is_empty() || a.contains(&0) {
        return Err(Error::InvalidPartition("parts must be positive".into()));
    }
    if a.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidPartition("parts must be non-increasing".into()));
    }
    Ok(())
}

/// k! / Π a_i!.
pub fn multinomial(a: &[usize]) -> BigUint {
    let k: usize = a.iter().sum();
    a.iter().fold(factorial(k as u64), |acc, &ai| acc / factorial(ai as u64))
}

/// 1 / Π (multiplicity of each distinct part size)!.
pub fn sym(a: &[usize]) -> Rational {
    let den = multiplicities(a).into_iter().fold(BigUint::one(), |acc, m| acc * factorial(m as u64));
    Rational::new(1.into(), den.into())
}

/// p(K_a, x) from symmetric sums. Any s of the r singleton parts may sit in the
/// clique, which contributes C(r, s) x_0^s S_{a_1..a_{l-s}}(x).
pub fn density_formula(a: &[usize], x: &PartiteVector) -> Result<Rational> {
    validate_partition(a)?;
    let l = a.len();
    let t = a.iter().filter(|&&s| s >= 2).count();
    let mut sum = Rational::zero();
    let mut x0_pow = Rational::one();
    for s in 0..=l - t {
        let exps: Vec<u32> = a[..l - s].iter().map(|&d| d as u32).collect();
        let ways = from_biguint(binomial((l - t) as u64, s as u64));
        sum += ways * &x0_pow * elementary_symmetric(x, &SymmetricIndex::new(exps));
        x0_pow *= x.x0();
    }
    Ok(from_biguint(multinomial(a)) * sym(a) * sum)
}

/// P(K_a, G) for a complete partite G, by assigning parts of K_a to distinct parts of G.
pub fn count_partite(a: &[usize], g: &CompletePartiteShape) -> Result<BigUint> {
    validate_partition(a)?;
    let l = a.len();
    if l > 24 {
        return Err(Error::InvalidPartition("too many parts".into()));
    }
    let big = g.independent_parts();
    let singles = g.clique_size() as u64;
    let mut dp = vec![BigUint::zero(); 1 << l];
    dp[0] = BigUint::one();
    for &size in big {
        let choices: Vec<BigUint> = a.iter().map(|&aj| binomial(size as u64, aj as u64)).collect();
        for mask in (0..1usize << l).rev() {
            if dp[mask].is_zero() {
                continue;
            }
            for (j, c) in choices.iter().enumerate() {
                if mask >> j & 1 == 0 && !c.is_zero() {
                    let add = &dp[mask] * c;
                    dp[mask | 1 << j] += add;
                }
            }
        }
    }
    let mut total = BigUint::zero();
    for (mask, ways) in dp.iter().enumerate() {
        if ways.is_zero() {
            continue;
        }
        let rest: Vec<usize> = (0..l).filter(|&j| mask >> j & 1 == 0).collect();
        if rest.iter().any(|&j| a[j] != 1) {
            continue;
        }
        total += ways * falling(singles, rest.len() as u64);
    }
    let symmetry = multiplicities(a).into_iter().fold(BigUint::one(), |acc, m| acc * factorial(m as u64));
    Ok(total / symmetry)
}

/// λ of a complete partite graph through its shape.
pub fn lambda_of_shape(spec: &ObjectiveSpec, g: &CompletePartiteShape) -> Result<Rational> {
    let n = g.order();
    let k = spec.k();
    if n < k {
        return Err(Error::TooFewVertices { n, k });
    }
    let mut total = Rational::zero();
    for (shape, gamma) in spec.partite_gamma() {
        total += gamma * from_biguint(count_partite(shape.sizes(), g)?);
    }
    Ok(total / from_biguint(binomial(n as u64, k as u64)))
}

/// Σ_a γ(K_a) p(K_a, x): λ(x) for any objective, through closed forms.
pub fn lambda_closed_form(spec: &ObjectiveSpec, x: &PartiteVector) -> Result<Rational> {
    let mut total = Rational::zero();
    for (shape, gamma) in spec.partite_gamma() {
        total += gamma * density_formula(shape.sizes(), x)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::count::induced_count;
    use crate::graph::Graph;
    use crate::rational::rat;

    fn half() -> PartiteVector {
        PartiteVector::uniform(2)
    }

    #[test]
    fn symmetric_sums() {
        assert_eq!(elementary_symmetric(&half(), &SymmetricIndex::new(vec![2])), rat(1, 2));
        assert_eq!(elementary_symmetric(&half(), &SymmetricIndex::new(vec![2, 1])), rat(1, 4));
        let excl = SymmetricIndex::new(vec![1]).excluding([1]);
        assert_eq!(elementary_symmetric(&half(), &excl), rat(1, 2));
        assert_eq!(elementary_symmetric(&half(), &SymmetricIndex::new(vec![1, 1, 1])), rat(0, 1));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(density_formula(&[2, 2], &half()).unwrap(), rat(3, 8));
        assert_eq!(density_formula(&[2, 1], &half()).unwrap(), rat(3, 4));
        assert_eq!(density_formula(&[2, 1, 1], &PartiteVector::uniform(5)).unwrap(), rat(72, 125));
        assert_eq!(density_formula(&[2, 1, 1, 1], &PartiteVector::uniform(8)).unwrap(), rat(525, 1024));
        let x = PartiteVector::new(vec![rat(3, 5)]).unwrap();
        assert_eq!(density_formula(&[3, 1, 1], &x).unwrap(), rat(216, 625));
        assert!(density_formula(&[1, 2], &x).is_err());
    }

    #[test]
    fn partite_counts() {
        let s = |v: &[usize]| CompletePartiteShape::new(v.to_vec()).unwrap();
        assert_eq!(count_partite(&[2, 1, 1, 1], &s(&[2; 8])).unwrap(), BigUint::from(2240u32));
        assert_eq!(count_partite(&[3], &s(&[9])).unwrap(), BigUint::from(84u32));
        assert_eq!(count_partite(&[1, 1, 1], &s(&[2, 2, 2])).unwrap(), BigUint::from(8u32));
        for shape in [vec![3, 2, 1, 1], vec![4, 2, 2], vec![2, 1, 1, 1, 1], vec![5, 3]] {
            let g = Graph::complete_partite(&shape).unwrap();
            for a in crate::partitions::partitions(4) {
                let f = Graph::complete_partite(&a).unwrap();
                assert_eq!(
                    count_partite(&a, &s(&shape)).unwrap(),
                    BigUint::from(induced_count(&f, &g).unwrap()),
                    "{a:?} in {shape:?}"
                );
            }
        }
    }
}
