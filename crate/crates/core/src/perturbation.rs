//! Derivative calculus on the partite limit space: flip gradients, attachment
//! values as polynomials in α, vertex gradients, partial derivatives, Lagrange
//! residuals, their finite-n counterparts, and the wrong-pair comparison bounds.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::count::{attach, big_lambda_restricted, code_histogram, lambda_graph, lambda_vertex};
use crate::graph::shape::{complete_partite_layout, PartiteLayout};
use crate::graph::{pair_bit, BitIter, Graph};
use crate::objective::ObjectiveSpec;
use crate::partite::engine::{accumulate, code_of_labels, expectation, lambda_of_vector, WeightTable};
use crate::partite::{AttachmentPattern, PartiteVector};
use crate::poly::UniPoly;
use crate::rational::{self, binomial, from_biguint, to_f64, Rational};

fn check_index(x: &PartiteVector, i: usize) -> Result<()> {
    if x.in_support_star(i) {
        Ok(())
    } else {
        Err(Error::IndexOutsideSupport(i))
    }
}

/// ∇••_{i1 i2} λ(x): expected loss from toggling the pair between two samples
/// placed in parts i1 and i2 (index 0 is the clique).
pub fn flip_gradient(spec: &ObjectiveSpec, x: &PartiteVector, i1: usize, i2: usize) -> Result<Rational> {
    check_index(x, i1)?;
    check_index(x, i2)?;
    let table = WeightTable::new(x)?;
    let free = spec.k() - 2;
    let masses = accumulate(&table, &[i1, i2], free, code_of_labels)?;
    let flipped: HashMap<u64, _> = masses.iter().map(|(&c, m)| (c ^ 1, m.clone())).collect();
    let denom = table.denom_power(free);
    Ok(expectation(spec, &masses, &denom) - expectation(spec, &flipped, &denom))
}

/// λ(x, (b, α)) as a polynomial in α: the density at a new vertex joined to
/// the parts with b(i) = 1 and to each clique sample independently with
/// probability α.
pub fn attach_polynomial(spec: &ObjectiveSpec, x: &PartiteVector, b: &[bool]) -> Result<UniPoly> {
    if b.len() != x.len() {
        return Err(Error::InvalidVector(format!("pattern has {} entries for {} parts", b.len(), x.len())));
    }
    let k = spec.k();
    let u = k - 1;
    let table = WeightTable::new(x)?;
    let masses = accumulate(&table, &[], u, |labels: &[usize]| {
        let mut code = code_of_labels(labels);
        let mut clique = 0u32;
        for (j, &l) in labels.iter().enumerate() {
            if l == 0 {
                clique |= 1 << j;
            } else if b[l - 1] {
                code |= 1 << pair_bit(j, u);
            }
        }
        (code, clique)
    })?;
    // Bernstein basis α^s (1−α)^{c−s}.
    let alpha = UniPoly::x();
    let beta = &UniPoly::one() - &alpha;
    let basis = |c: u32, s: u32| &alpha.pow(s) * &beta.pow(c - s);
    let mut by_basis: HashMap<(u32, u32), Rational> = HashMap::new();
    let mut gamma_memo: HashMap<u64, Rational> = HashMap::new();
    for ((code, clique), m) in &masses {
        let c = clique.count_ones();
        let positions: Vec<usize> = BitIter(*clique as u64).collect();
        for sub in 0u32..1 << c {
            let mut full = *code;
            for (t, &j) in positions.iter().enumerate() {
                if sub >> t & 1 == 1 {
                    full |= 1 << pair_bit(j, u);
                }
            }
            let g = gamma_memo.entry(full).or_insert_with(|| spec.gamma_of_code(full));
            if g.is_zero() {
                continue;
            }
            *by_basis.entry((c, sub.count_ones())).or_insert_with(Rational::zero) +=
                &*g * Rational::from_integer(BigInt::from(m.clone()));
        }
    }
    let denom = from_biguint(table.denom_power(u));
    let mut keys: Vec<_> = by_basis.keys().copied().collect();
    keys.sort_unstable();
    let mut out = UniPoly::zero();
    for key in keys {
        out = &out + &basis(key.0, key.1).scale(&(&by_basis[&key] / &denom));
    }
    Ok(out)
}

/// λ(x, (b, α)) at the pattern's α.
pub fn attach_value(spec: &ObjectiveSpec, x: &PartiteVector, p: &AttachmentPattern) -> Result<Rational> {
    Ok(attach_polynomial(spec, x, &p.b)?.eval(&p.alpha))
}

/// The reference clone pattern: e_1 when x has parts, otherwise the clique clone.
pub fn reference_pattern(x: &PartiteVector) -> AttachmentPattern {
    let i = if x.is_empty() { 0 } else { 1 };
    AttachmentPattern::clone_of(x, i).expect("reference index in support")
}

/// ∇•_{b,α} λ(x) = λ(x, (e_1, 1)) − λ(x, (b, α)) as a polynomial in α.
pub fn vertex_gradient_polynomial(spec: &ObjectiveSpec, x: &PartiteVector, b: &[bool]) -> Result<UniPoly> {
    let r = reference_pattern(x);
    let reference = attach_value(spec, x, &r)?;
    Ok(&UniPoly::constant(reference) - &attach_polynomial(spec, x, b)?)
}

pub fn vertex_gradient(spec: &ObjectiveSpec, x: &PartiteVector, p: &AttachmentPattern) -> Result<Rational> {
    Ok(vertex_gradient_polynomial(spec, x, &p.b)?.eval(&p.alpha))
}

/// ∂λ/∂x_i = k · λ(x, (e_i, 1)), with λ viewed as a form in (x_0, x_1, …).
pub fn partial_derivative(spec: &ObjectiveSpec, x: &PartiteVector, i: usize) -> Result<Rational> {
    check_index(x, i)?;
    let p = AttachmentPattern::clone_of(x, i)?;
    Ok(attach_value(spec, x, &p)? * Rational::from_integer(spec.k().into()))
}

/// max over i ∈ supp*(x) of |(1/k) ∂λ/∂x_i − λ(x)|.
pub fn lagrange_residual(spec: &ObjectiveSpec, x: &PartiteVector) -> Result<Rational> {
    let value = lambda_of_vector(spec, x)?;
    let mut worst = Rational::zero();
    for i in x.support_star() {
        let p = AttachmentPattern::clone_of(x, i)?;
        let r = (attach_value(spec, x, &p)? - &value).abs();
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}

/// Floating-point λ as a form in the masses (index 0 is the clique).
pub fn lambda_f64(spec: &ObjectiveSpec, masses: &[f64]) -> f64 {
    let k = spec.k();
    let mut gamma: HashMap<u64, f64> = HashMap::new();
    let mut labels = Vec::with_capacity(k);
    let mut total = 0.0;
    fn walk(
        spec: &ObjectiveSpec,
        masses: &[f64],
        labels: &mut Vec<usize>,
        weight: f64,
        gamma: &mut HashMap<u64, f64>,
        total: &mut f64,
    ) {
        if labels.len() == spec.k() {
            let code = code_of_labels(labels);
            let g = *gamma.entry(code).or_insert_with(|| to_f64(&spec.gamma_of_code(code)));
            *total += weight * g;
            return;
        }
        for (l, &m) in masses.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            labels.push(l);
            walk(spec, masses, labels, weight * m, gamma, total);
            labels.pop();
        }
    }
    walk(spec, masses, &mut labels, 1.0, &mut gamma, &mut total);
    total
}

/// Central finite difference of λ in coordinate i at step h.
pub fn partial_derivative_fd(spec: &ObjectiveSpec, x: &PartiteVector, i: usize, h: f64) -> Result<f64> {
    check_index(x, i)?;
    let mut masses = vec![to_f64(x.x0())];
    masses.extend(x.parts_f64());
    let mut plus = masses.clone();
    plus[i] += h;
    let mut minus = masses;
    minus[i] -= h;
    Ok((lambda_f64(spec, &plus) - lambda_f64(spec, &minus)) / (2.0 * h))
}

/// (Λ(G) − Λ(G ⊕ uv)) / C(n−2, k−2).
pub fn finite_flip_gradient(spec: &ObjectiveSpec, g: &Graph, u: usize, v: usize) -> Result<Rational> {
    if u == v {
        return Err(Error::SelfPair(u));
    }
    let k = spec.k();
    if g.order() < k {
        return Err(Error::TooFewVertices { n: g.order(), k });
    }
    let hist = code_histogram(g, k, &[u, v], &[])?;
    let mut diff = Rational::zero();
    for (&code, &m) in &hist {
        diff += (spec.gamma_of_code(code) - spec.gamma_of_code(code ^ 1)) * Rational::from_integer(m.into());
    }
    Ok(diff / from_biguint(binomial(g.order() as u64 - 2, k as u64 - 2)))
}

/// λ(G +_{b,α} u, u) for a complete partite G with the given layout.
pub fn finite_attach_value(
    spec: &ObjectiveSpec,
    g: &Graph,
    layout: &PartiteLayout,
    b: &[bool],
    alpha: &Rational,
) -> Result<Rational> {
    let h = attach(g, layout, b, alpha)?;
    lambda_vertex(spec, &h, h.order() - 1)
}

/// The three error terms of the wrong-pair comparison lemma.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticBounds {
    #[serde(with = "rational::serde_str")]
    pub xi0: Rational,
    #[serde(with = "rational::serde_str")]
    pub xi1: Rational,
    #[serde(with = "rational::serde_str")]
    pub xi2: Rational,
    pub wrong_pairs: usize,
    pub max_degree: usize,
}

impl DiagnosticBounds {
    pub fn new(spec: &ObjectiveSpec, h: usize, wrong_pairs: usize, max_degree: usize, c: &Rational) -> Self {
        let k = Rational::from_integer(spec.k().into());
        let h = Rational::from_integer(h.into());
        let t = Rational::from_integer(wrong_pairs.into());
        let d = Rational::from_integer(max_degree.into());
        let two_gamma = spec.gamma_max() * Rational::from_integer(2.into());
        let pow = |r: &Rational, e: usize| num_traits::pow(r.clone(), e);
        DiagnosticBounds {
            xi0: pow(&k, 2) * &t * c / pow(&h, 2),
            xi1: &two_gamma * pow(&k, 4) * pow(&t, 2) / pow(&h, 4),
            xi2: &two_gamma * pow(&k, 3) * &t * &d / pow(&h, 3),
            wrong_pairs,
            max_degree,
        }
    }
}

/// One case of the comparison lemma: whether its hypothesis holds on this
/// instance and, if so, whether the stated inequality holds.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonCase {
    pub name: String,
    pub hypothesis: bool,
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    pub conclusion: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub bounds: DiagnosticBounds,
    /// λ(H′) − λ(H).
    #[serde(with = "rational::serde_str")]
    pub difference: Rational,
    #[serde(with = "rational::serde_str_vec")]
    pub pair_gradients: Vec<Rational>,
    pub is_star: bool,
    pub cases: Vec<ComparisonCase>,
}

/// Evaluates the wrong-pair comparison lemma on a concrete pair (H, H′).
pub fn compare_bounds(spec: &ObjectiveSpec, h: &Graph, h_prime: &Graph, c: &Rational) -> Result<ComparisonReport> {
    let n = h.order();
    if h_prime.order() != n {
        return Err(Error::OrderMismatch(n, h_prime.order()));
    }
    let classes = complete_partite_layout(h_prime).ok_or(Error::NotCompletePartite)?;
    // Independent classes of size ≥ 2 are parts; singletons form the clique.
    let mut big: Vec<&Vec<usize>> = classes.iter().filter(|c| c.len() >= 2).collect();
    big.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let mut part_of = vec![0usize; n];
    for (i, class) in big.iter().enumerate() {
        for &v in class.iter() {
            part_of[v] = i + 1;
        }
    }
    let nn = Rational::from_integer(n.into());
    let x = PartiteVector::new(big.iter().map(|c| Rational::from_integer(c.len().into()) / &nn).collect())?;
    let mut wrong = Vec::new();
    for v in 1..n {
        for u in 0..v {
            if h.has_edge(u, v) != h_prime.has_edge(u, v) {
                wrong.push((u, v));
            }
        }
    }
    let mut degree = vec![0usize; n];
    for &(u, v) in &wrong {
        degree[u] += 1;
        degree[v] += 1;
    }
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let is_star = wrong.len() <= 1 || max_degree == wrong.len();
    let mut memo: HashMap<(usize, usize), Rational> = HashMap::new();
    let mut grads = Vec::with_capacity(wrong.len());
    for &(u, v) in &wrong {
        let key = (part_of[u].min(part_of[v]), part_of[u].max(part_of[v]));
        if let std::collections::hash_map::Entry::Vacant(e) = memo.entry(key) {
            e.insert(flip_gradient(spec, &x, key.0, key.1)?);
        }
        grads.push(memo[&key].clone());
    }
    let bounds = DiagnosticBounds::new(spec, n, wrong.len(), max_degree, c);
    let difference = lambda_graph(spec, h_prime)? - lambda_graph(spec, h)?;
    let all_ge = grads.iter().all(|g| g >= c);
    let all_le = grads.iter().all(|g| g <= c);
    let half = Rational::new(1.into(), 2.into());
    let lower_i = &bounds.xi0 * &half - &bounds.xi1 - &bounds.xi2;
    let lower_ii = &bounds.xi0 * &half - &bounds.xi2;
    let upper_iii = &bounds.xi0 + &bounds.xi1 + &bounds.xi2;
    let cases = vec![
        ComparisonCase { name: "lower".into(), hypothesis: all_ge, conclusion: difference >= lower_i, bound: lower_i },
        ComparisonCase {
            name: "lower_star".into(),
            hypothesis: all_ge && is_star,
            conclusion: difference >= lower_ii,
            bound: lower_ii,
        },
        ComparisonCase { name: "upper".into(), hypothesis: all_le, conclusion: difference <= upper_iii, bound: upper_iii },
    ];
    Ok(ComparisonReport { bounds, difference, pair_gradients: grads, is_star, cases })
}

/// Λ restricted to k-sets through both endpoints, before and after the flip.
pub fn flip_loss(spec: &ObjectiveSpec, g: &Graph, u: usize, v: usize) -> Result<Rational> {
    let before = big_lambda_restricted(spec, g, &[u, v], &[])?;
    let after = big_lambda_restricted(spec, &g.flip(u, v)?, &[u, v], &[])?;
    Ok(before - after)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::shape::CompletePartiteShape;
    use crate::rational::{int, rat};

    fn kp(sizes: &[usize]) -> ObjectiveSpec {
        ObjectiveSpec::induced_density(CompletePartiteShape::new(sizes.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn k2111_gradients() {
        let spec = kp(&[2, 1, 1, 1]);
        let x = PartiteVector::uniform(8);
        assert_eq!(flip_gradient(&spec, &x, 1, 2).unwrap(), rat(150, 512));
        assert_eq!(flip_gradient(&spec, &x, 3, 3).unwrap(), rat(84, 512));
        assert!(flip_gradient(&spec, &x, 0, 1).is_err());
        let mut b = vec![true; 8];
        b[3] = false;
        assert_eq!(attach_polynomial(&spec, &x, &b).unwrap(), UniPoly::constant(rat(525, 1024)));
        let all = attach_polynomial(&spec, &x, &[true; 8]).unwrap();
        assert_eq!(all, UniPoly::constant(rat(63, 128)));
        let p = AttachmentPattern::new(&x, vec![true; 8], int(1)).unwrap();
        assert_eq!(vertex_gradient(&spec, &x, &p).unwrap(), rat(21, 1024));
        assert_eq!(partial_derivative(&spec, &x, 4).unwrap(), rat(2625, 1024));
        assert_eq!(lagrange_residual(&spec, &x).unwrap(), int(0));
    }

    #[test]
    fn k311_attachment_polynomials() {
        let spec = kp(&[3, 1, 1]);
        let x = PartiteVector::new(vec![rat(3, 5)]).unwrap();
        let lam = rat(216, 625);
        assert_eq!(attach_polynomial(&spec, &x, &[true]).unwrap(), UniPoly::monomial(1, lam.clone()));
        assert_eq!(attach_polynomial(&spec, &x, &[false]).unwrap(), UniPoly::monomial(2, lam));
        assert_eq!(lagrange_residual(&spec, &x).unwrap(), int(0));
    }

    #[test]
    fn independent_set_cases() {
        let spec = kp(&[3]);
        let x = PartiteVector::uniform(2);
        assert_eq!(flip_gradient(&spec, &x, 1, 1).unwrap(), rat(1, 2));
        let one = PartiteVector::uniform(1);
        assert_eq!(partial_derivative(&spec, &one, 1).unwrap(), int(3));
    }

    #[test]
    fn finite_differences_match() {
        let spec = kp(&[2, 1, 1]);
        let x = PartiteVector::new(vec![rat(1, 3), rat(1, 4)]).unwrap();
        for i in x.support_star() {
            let exact = to_f64(&partial_derivative(&spec, &x, i).unwrap());
            let fd = partial_derivative_fd(&spec, &x, i, 1e-6).unwrap();
            assert!((exact - fd).abs() < 1e-9, "{i}: {exact} vs {fd}");
        }
    }

    #[test]
    fn finite_flip_matches_loss() {
        let spec = kp(&[2, 2]);
        let g = Graph::complete_partite(&[4, 4]).unwrap();
        let f = finite_flip_gradient(&spec, &g, 0, 5).unwrap();
        assert_eq!(f * from_biguint(binomial(6, 2)), flip_loss(&spec, &g, 0, 5).unwrap());
    }

    #[test]
    fn comparison_single_pair() {
        let spec = kp(&[2, 2]);
        let hp = Graph::complete_partite(&[6, 6]).unwrap();
        let h = hp.flip(0, 6).unwrap();
        let c = flip_gradient(&spec, &PartiteVector::uniform(2), 1, 2).unwrap();
        let report = compare_bounds(&spec, &h, &hp, &c).unwrap();
        assert_eq!(report.bounds.wrong_pairs, 1);
        assert!(report.cases[1].hypothesis && report.cases[1].conclusion);
        let same = compare_bounds(&spec, &hp, &hp, &c).unwrap();
        assert_eq!(same.difference, int(0));
        assert!(same.cases.iter().all(|c| c.conclusion));
    }
}
