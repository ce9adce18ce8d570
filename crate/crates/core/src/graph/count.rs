//! Subset sums Λ(G), λ(G), vertex densities and induced counts.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::canon::{canonical_key, canonical_key_of_code, class_table, MAX_CANONICAL_ORDER};
use super::shape::PartiteLayout;
use super::{Graph, Subsets};
use crate::error::{Error, Result};
use crate::objective::ObjectiveSpec;
use crate::rational::{binomial, from_biguint, Rational};

/// Largest number of subsets enumerated by a single count.
pub const SUBSET_LIMIT: u64 = 100_000_000;

/// Multiset of labelled codes of `G[S]` over k-sets `S ⊇ include` avoiding `exclude`.
/// Codes list `include` first, then the chosen vertices in increasing order.
pub fn code_histogram(g: &Graph, k: usize, include: &[usize], exclude: &[usize]) -> Result<HashMap<u64, u64>> {
    let n = g.order();
    for &v in include.iter().chain(exclude) {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if include.len() > k {
        return Ok(HashMap::new());
    }
    let others: Vec<usize> = (0..n).filter(|v| !include.contains(v) && !exclude.contains(v)).collect();
    let r = k - include.len();
    let total = binomial(others.len() as u64, r as u64);
    if total > SUBSET_LIMIT.into() {
        return Err(Error::BoundExceeded(format!("{total} subsets exceed {SUBSET_LIMIT}")));
    }
    if r == 0 {
        let mut h = HashMap::new();
        h.insert(g.induced_code(include), 1);
        return Ok(h);
    }
    let hist = (0..others.len())
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<u64, u64>, first| {
            let tail = &others[first + 1..];
            let mut buf: Vec<usize> = include.to_vec();
            buf.push(others[first]);
            let base = buf.len();
            for combo in Subsets::new(tail.len(), r - 1) {
                buf.truncate(base);
                buf.extend(combo.iter().map(|&i| tail[i]));
                *acc.entry(g.induced_code(&buf)).or_insert(0) += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (c, m) in b {
                *a.entry(c).or_insert(0) += m;
            }
            a
        });
    Ok(hist)
}

/// Σ_code multiplicity · γ(code), exactly.
pub fn weighted_gamma_sum(spec: &ObjectiveSpec, hist: &HashMap<u64, u64>) -> Rational {
    if let Some(dense) = spec.dense() {
        if let Some(scaled) = &dense.scaled {
            let mut acc: i128 = 0;
            let mut ok = true;
            for (&code, &m) in hist {
                match (m as i128).checked_mul(scaled[code as usize]).and_then(|t| acc.checked_add(t)) {
                    Some(v) => acc = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Rational::new(BigInt::from(acc), dense.scale.clone());
            }
        }
    }
    let mut memo: HashMap<u64, Rational> = HashMap::new();
    let mut sum = Rational::zero();
    for (&code, &m) in hist {
        let g = memo.entry(code).or_insert_with(|| spec.gamma_of_code(code));
        sum += &*g * Rational::from_integer(m.into());
    }
    sum
}

/// Unnormalised Λ(G) = Σ_X γ(G[X]).
pub fn big_lambda(spec: &ObjectiveSpec, g: &Graph) -> Result<Rational> {
    check_order(spec, g)?;
    Ok(weighted_gamma_sum(spec, &code_histogram(g, spec.k(), &[], &[])?))
}

/// Λ restricted to k-sets containing `include` and avoiding `exclude`.
pub fn big_lambda_restricted(spec: &ObjectiveSpec, g: &Graph, include: &[usize], exclude: &[usize]) -> Result<Rational> {
    Ok(weighted_gamma_sum(spec, &code_histogram(g, spec.k(), include, exclude)?))
}

/// λ(G) = Λ(G) / C(n, k).
pub fn lambda_graph(spec: &ObjectiveSpec, g: &Graph) -> Result<Rational> {
    let total = big_lambda(spec, g)?;
    Ok(total / from_biguint(binomial(g.order() as u64, spec.k() as u64)))
}

/// Λ(G, v) = Λ(G) − Λ(G − v): the sets containing v.
pub fn big_lambda_vertex(spec: &ObjectiveSpec, g: &Graph, v: usize) -> Result<Rational> {
    check_order(spec, g)?;
    big_lambda_restricted(spec, g, &[v], &[])
}

/// λ(G, v) = Λ(G, v) / C(n−1, k−1).
pub fn lambda_vertex(spec: &ObjectiveSpec, g: &Graph, v: usize) -> Result<Rational> {
    let total = big_lambda_vertex(spec, g, v)?;
    Ok(total / from_biguint(binomial(g.order() as u64 - 1, spec.k() as u64 - 1)))
}

fn check_order(spec: &ObjectiveSpec, g: &Graph) -> Result<()> {
    if g.order() < spec.k() {
        return Err(Error::TooFewVertices { n: g.order(), k: spec.k() });
    }
    Ok(())
}

/// P(F, G): number of v(F)-subsets of G inducing a copy of F.
pub fn induced_count(f: &Graph, g: &Graph) -> Result<u64> {
    let k = f.order();
    if k > MAX_CANONICAL_ORDER {
        return Err(Error::TooManyVertices { n: k, limit: MAX_CANONICAL_ORDER });
    }
    if k > g.order() {
        return Ok(0);
    }
    let target = canonical_key(f)?;
    let edges = f.edge_count() as u32;
    let hist = code_histogram(g, k, &[], &[])?;
    let table = class_table(k);
    let target_class = table.map(|t| t.class_of_code[f.code() as usize]);
    Ok(hist
        .iter()
        .filter(|(&code, _)| code.count_ones() == edges)
        .filter(|(&code, _)| match (table, target_class) {
            (Some(t), Some(c)) => t.class_of_code[code as usize] == c,
            _ => canonical_key_of_code(k, code) == target,
        })
        .map(|(_, &m)| m)
        .sum())
}

/// G +_{b,α} u: appends a vertex adjacent to every part with `b[i]`, and to the
/// ⌊α|V_0|⌋ lowest-indexed clique vertices.
pub fn attach(g: &Graph, layout: &PartiteLayout, b: &[bool], alpha: &Rational) -> Result<Graph> {
    layout.check(g)?;
    if b.len() != layout.parts.len() {
        return Err(Error::InvalidPartition(format!(
            "pattern has {} entries for {} parts",
            b.len(),
            layout.parts.len()
        )));
    }
    if *alpha < Rational::zero() || *alpha > Rational::from_integer(1.into()) {
        return Err(Error::InvalidVector("alpha outside [0,1]".into()));
    }
    let mut mask = 0u64;
    for (part, &on) in layout.parts.iter().zip(b) {
        if on {
            mask |= part.iter().fold(0u64, |m, &v| m | 1 << v);
        }
    }
    let count = (alpha * Rational::from_integer(layout.clique.len().into()))
        .floor()
        .to_integer()
        .to_usize()
        .unwrap_or(0);
    let mut clique = layout.clique.clone();
    clique.sort_unstable();
    for &v in clique.iter().take(count) {
        mask |= 1 << v;
    }
    g.add_vertex(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::shape::CompletePartiteShape;
    use crate::rational::rat;

    fn kp(sizes: &[usize]) -> ObjectiveSpec {
        ObjectiveSpec::induced_density(CompletePartiteShape::new(sizes.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn c4_in_k33() {
        let g = Graph::complete_partite(&[3, 3]).unwrap();
        assert_eq!(lambda_graph(&kp(&[2, 2]), &g).unwrap(), rat(9, 15));
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(induced_count(&c4, &g).unwrap(), 9);
    }

    #[test]
    fn vertex_identity() {
        let spec = kp(&[2, 1]);
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 5)]).unwrap();
        let total = big_lambda(&spec, &g).unwrap();
        for v in 0..6 {
            let without = big_lambda(&spec, &g.remove_vertex(v).unwrap()).unwrap();
            assert_eq!(total.clone() - without, big_lambda_vertex(&spec, &g, v).unwrap());
        }
        assert!(lambda_graph(&spec, &Graph::empty(2).unwrap()).is_err());
    }

    #[test]
    fn k2111_on_eight_pairs() {
        let spec = kp(&[2, 1, 1, 1]);
        let g = Graph::complete_partite(&[2; 8]).unwrap();
        let value = lambda_graph(&spec, &g).unwrap();
        assert_eq!(value, rat(2240, 4368));
        assert_eq!(lambda_vertex(&spec, &g, 5).unwrap(), value);
    }

    #[test]
    fn induced_counts() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(induced_count(&k3, &Graph::complete_partite(&[2, 2, 2]).unwrap()).unwrap(), 8);
        assert_eq!(induced_count(&k3, &Graph::complete(7).unwrap()).unwrap(), 35);
    }

    #[test]
    fn attach_patterns() {
        let layout = PartiteLayout::from_sizes(&[2; 8], 0);
        let g = layout.graph().unwrap();
        let mut b = vec![true; 8];
        b[3] = false;
        let h = attach(&g, &layout, &b, &rat(1, 1)).unwrap();
        assert_eq!(h.degree(16), 14);
        let layout = PartiteLayout::from_sizes(&[3], 4);
        let g = layout.graph().unwrap();
        let h = attach(&g, &layout, &[false], &rat(3, 4)).unwrap();
        assert_eq!(h.neighbours(7), 0b1111000 & !(1 << 6));
    }
}
