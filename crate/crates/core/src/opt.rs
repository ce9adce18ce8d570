//! Searching for maximisers: exhaustive scans over complete partite shapes of a
//! fixed order, multistart ascent over the partite limit space, and the exact
//! one-dimensional solver for complete bipartite targets.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::shape::CompletePartiteShape;
use crate::objective::ObjectiveSpec;
use crate::partite::engine::{code_of_labels, lambda_of_vector};
use crate::partite::symmetric::lambda_of_shape;
use crate::partite::PartiteVector;
use crate::partitions::partitions;
use crate::perturbation::lagrange_residual;
use crate::poly::{AlgebraicNumber, UniPoly};
use crate::rational::{self, binomial, factorial, from_biguint, nearest_small_fraction, to_f64, Rational};

/// Largest order accepted by the exhaustive shape scan.
pub const FINITE_OPT_MAX_ORDER: usize = 40;
/// Largest support accepted by the continuous search.
pub const MAX_SUPPORT_LIMIT: usize = 10;
/// Residual threshold for reported candidates.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Co-maximiser threshold on λ.
pub const VALUE_TOLERANCE: f64 = 1e-9;
const CLUSTER_RADIUS: f64 = 1e-6;
const SNAP_RADIUS: f64 = 1e-7;
const ZERO_MASS: f64 = 1e-9;
/// Parts below this mass are indistinguishable from clique mass.
const DUST: f64 = 1e-7;

#[derive(Debug, Clone, Serialize)]
pub struct FiniteOpt {
    pub n: usize,
    #[serde(with = "rational::serde_str")]
    pub lambda: Rational,
    pub shapes: Vec<CompletePartiteShape>,
}

/// λ(n) over complete partite graphs of order n, with every maximising shape.
pub fn finite_opt(spec: &ObjectiveSpec, n: usize) -> Result<FiniteOpt> {
    if n > FINITE_OPT_MAX_ORDER {
        return Err(Error::TooManyVertices { n, limit: FINITE_OPT_MAX_ORDER });
    }
    if n < spec.k() {
        return Err(Error::TooFewVertices { n, k: spec.k() });
    }
    let values: Vec<(CompletePartiteShape, Rational)> = partitions(n)
        .into_par_iter()
        .map(|p| {
            let shape = CompletePartiteShape::new(p)?;
            let v = lambda_of_shape(spec, &shape)?;
            Ok((shape, v))
        })
        .collect::<Result<_>>()?;
    let lambda = values.iter().map(|(_, v)| v.clone()).max().unwrap_or_else(Rational::zero);
    let shapes = values.into_iter().filter(|(_, v)| *v == lambda).map(|(s, _)| s).collect();
    Ok(FiniteOpt { n, lambda, shapes })
}

/// The shape obtained by merging the two smallest parts.
pub fn merge_smallest(shape: &CompletePartiteShape) -> Option<CompletePartiteShape> {
    let sizes = shape.sizes();
    let m = sizes.len();
    if m < 2 {
        return None;
    }
    let mut merged = sizes[..m - 2].to_vec();
    merged.push(sizes[m - 2] + sizes[m - 1]);
    CompletePartiteShape::new(merged).ok()
}

/// λ as a polynomial in the clique mass y₀ and the power sums p_j = Σ_i x_i^j
/// of the parts, evaluated in floating point.
#[derive(Debug, Clone)]
pub struct MassForm {
    k: usize,
    terms: Vec<FormTerm>,
}

#[derive(Debug, Clone)]
struct FormTerm {
    coeff: f64,
    clique: i32,
    powers: Vec<usize>,
}

/// Restricted growth strings of length `len`; `with_zero` adds a distinguished label 0.
fn growth_strings(len: usize, with_zero: bool) -> Vec<Vec<usize>> {
    fn walk(len: usize, with_zero: bool, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let start = if with_zero { 0 } else { 1 };
        for l in start..=max + 1 {
            cur.push(l);
            walk(len, with_zero, cur, max.max(l), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    walk(len, with_zero, &mut Vec::with_capacity(len), 0, &mut out);
    out
}

impl MassForm {
    pub fn new(spec: &ObjectiveSpec) -> Self {
        let k = spec.k();
        // (clique count, block sizes) -> Σ γ.
        let mut by_type: HashMap<(usize, Vec<usize>), Rational> = HashMap::new();
        for labels in growth_strings(k, true) {
            let g = spec.gamma_of_code(code_of_labels(&labels));
            if g.is_zero() {
                continue;
            }
            let z = labels.iter().filter(|&&l| l == 0).count();
            let blocks = labels.iter().copied().max().unwrap_or(0);
            let mut sizes: Vec<usize> = (1..=blocks).map(|b| labels.iter().filter(|&&l| l == b).count()).collect();
            sizes.sort_unstable();
            *by_type.entry((z, sizes)).or_insert_with(Rational::zero) += g;
        }
        // Augmented monomials to power sums by Möbius inversion over set partitions.
        let mut by_powers: HashMap<(usize, Vec<usize>), Rational> = HashMap::new();
        for ((z, sizes), coeff) in by_type {
            for sigma in growth_strings(sizes.len(), false) {
                let blocks = sigma.iter().copied().max().unwrap_or(0);
                let mut mobius = Rational::one();
                let mut powers = Vec::with_capacity(blocks);
                for b in 1..=blocks {
                    let members: Vec<usize> = (0..sizes.len()).filter(|&c| sigma[c] == b).collect();
                    let f = from_biguint(factorial(members.len() as u64 - 1));
                    mobius *= if members.len().is_multiple_of(2) { -f } else { f };
                    powers.push(members.iter().map(|&c| sizes[c]).sum());
                }
                powers.sort_unstable();
                *by_powers.entry((z, powers)).or_insert_with(Rational::zero) += &coeff * mobius;
            }
        }
        let mut terms: Vec<FormTerm> = by_powers
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((z, powers), c)| FormTerm { coeff: to_f64(&c), clique: z as i32, powers })
            .collect();
        terms.sort_by(|a, b| (a.clique, &a.powers).cmp(&(b.clique, &b.powers)));
        MassForm { k, terms }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn power_sums(&self, masses: &[f64]) -> Vec<f64> {
        (0..=self.k).map(|j| masses[1..].iter().map(|x| x.powi(j as i32)).sum()).collect()
    }

    /// λ at masses (y₀, x₁, …).
    pub fn value(&self, masses: &[f64]) -> f64 {
        let p = self.power_sums(masses);
        self.terms
            .iter()
            .map(|t| t.coeff * masses[0].powi(t.clique) * t.powers.iter().map(|&j| p[j]).product::<f64>())
            .sum()
    }

    /// λ and its gradient in every mass coordinate.
    pub fn value_and_gradient(&self, masses: &[f64]) -> (f64, Vec<f64>) {
        let p = self.power_sums(masses);
        let y0 = masses[0];
        let mut value = 0.0;
        let mut d_y0 = 0.0;
        let mut d_p = vec![0.0; self.k + 1];
        for t in &self.terms {
            let prod: f64 = t.powers.iter().map(|&j| p[j]).product();
            value += t.coeff * y0.powi(t.clique) * prod;
            if t.clique > 0 {
                d_y0 += t.coeff * t.clique as f64 * y0.powi(t.clique - 1) * prod;
            }
            for (pos, &j) in t.powers.iter().enumerate() {
                let others: f64 = t.powers.iter().enumerate().filter(|&(q, _)| q != pos).map(|(_, &i)| p[i]).product();
                d_p[j] += t.coeff * y0.powi(t.clique) * others;
            }
        }
        let mut grad = vec![d_y0];
        grad.extend(masses[1..].iter().map(|&x| {
            (1..=self.k).map(|j| d_p[j] * j as f64 * x.powi(j as i32 - 1)).sum::<f64>()
        }));
        (value, grad)
    }

    /// max over coordinates with positive mass of |(1/k)∂λ − λ|.
    pub fn residual(&self, masses: &[f64]) -> f64 {
        let (value, grad) = self.value_and_gradient(masses);
        let k = self.k as f64;
        masses
            .iter()
            .zip(&grad)
            .filter(|(m, _)| **m > ZERO_MASS)
            .map(|(_, g)| (g / k - value).abs())
            .fold(0.0, f64::max)
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumulative += ui;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

const MAX_ITERATIONS: usize = 20_000;

/// Projected gradient ascent with an adaptive step.
fn ascend(form: &MassForm, start: Vec<f64>) -> Vec<f64> {
    let mut y = project_simplex(&start);
    let (mut value, mut grad) = form.value_and_gradient(&y);
    let mut eta = 0.1;
    for _ in 0..MAX_ITERATIONS {
        let trial: Vec<f64> = y.iter().zip(&grad).map(|(a, g)| a + eta * g).collect();
        let cand = project_simplex(&trial);
        let (cv, cg) = form.value_and_gradient(&cand);
        if cv >= value {
            let moved = y.iter().zip(&cand).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            y = cand;
            value = cv;
            grad = cg;
            eta = (eta * 1.5).min(1e3);
            if moved < 1e-16 {
                break;
            }
        } else {
            eta *= 0.5;
            if eta < 1e-20 {
                break;
            }
        }
    }
    y
}

fn positive_parts(y: &[f64]) -> Vec<usize> {
    (1..y.len()).filter(|&i| y[i] > ZERO_MASS).collect()
}

/// Merge two smallest parts, split the largest part, or move the smallest part
/// into the clique.
fn structural_moves(y: &[f64]) -> Vec<Vec<f64>> {
    let mut parts = positive_parts(y);
    parts.sort_by(|&a, &b| y[a].total_cmp(&y[b]));
    let mut out = Vec::new();
    if parts.len() >= 2 {
        let mut z = y.to_vec();
        z[parts[0]] = 0.0;
        z[parts[1]] += y[parts[0]];
        out.push(z);
    }
    if let (Some(&largest), Some(empty)) = (parts.last(), (1..y.len()).find(|&i| y[i] <= ZERO_MASS)) {
        let mut z = y.to_vec();
        z[largest] = 0.6 * y[largest];
        z[empty] = 0.4 * y[largest];
        out.push(z);
    }
    if let Some(&smallest) = parts.first() {
        let mut z = y.to_vec();
        z[0] += y[smallest];
        z[smallest] = 0.0;
        out.push(z);
    }
    out
}

fn local_search(form: &MassForm, start: Vec<f64>) -> Vec<f64> {
    let mut best = ascend(form, start);
    let mut value = form.value(&best);
    for _ in 0..8 {
        let improved = structural_moves(&best).into_iter().find_map(|z| {
            let cand = ascend(form, z);
            let v = form.value(&cand);
            (v > value + 1e-12).then_some((cand, v))
        });
        match improved {
            Some((cand, v)) => {
                best = cand;
                value = v;
            }
            None => break,
        }
    }
    absorb_dust(form, best, value)
}

/// Parts of negligible mass behave like clique vertices: move them into the
/// clique and re-ascend, keeping the result unless λ drops.
fn absorb_dust(form: &MassForm, y: Vec<f64>, value: f64) -> Vec<f64> {
    if !y[1..].iter().any(|&v| v > 0.0 && v < DUST) {
        return y;
    }
    let mut z = y.clone();
    for i in 1..z.len() {
        if z[i] < DUST {
            z[0] += z[i];
            z[i] = 0.0;
        }
    }
    let cand = ascend(form, z);
    if form.value(&cand) >= value - 1e-10 {
        cand
    } else {
        y
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OptConfig {
    pub max_support: usize,
    pub starts: usize,
    pub seed: u64,
    /// Random starts are drawn from this many consecutive seeds.
    pub seeds: usize,
    pub snap_denominator: i64,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig { max_support: 6, starts: 200, seed: 0, seeds: 1, snap_denominator: 64 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    #[serde(rename = "x0_approx")]
    pub x0: f64,
    #[serde(rename = "parts_approx")]
    pub parts: Vec<f64>,
    pub lambda_approx: f64,
    pub residual_approx: f64,
    /// Number of starts converging here.
    pub hits: usize,
    pub exact: Option<PartiteVector>,
    #[serde(with = "rational::serde_str_opt")]
    pub exact_lambda: Option<Rational>,
    #[serde(with = "rational::serde_str_opt")]
    pub exact_residual: Option<Rational>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateSet {
    pub objective: String,
    pub config: OptConfig,
    pub starts_run: usize,
    /// Distinct candidates sorted by λ, best first.
    pub candidates: Vec<Candidate>,
    /// Indices of candidates within the co-maximiser tolerance of the best.
    pub maximisers: Vec<usize>,
}

impl CandidateSet {
    pub fn best(&self) -> Option<&Candidate> {
        self.candidates.first()
    }
}

fn masses_of(x: &PartiteVector, width: usize) -> Vec<f64> {
    let mut y = vec![to_f64(x.x0())];
    y.extend(x.parts_f64().into_iter().take(width));
    y.resize(width + 1, 0.0);
    y
}

fn starting_points(spec: &ObjectiveSpec, config: &OptConfig) -> Result<Vec<Vec<f64>>> {
    let m = config.max_support;
    let mut starts = vec![masses_of(&PartiteVector::zero(), m)];
    for r in 1..=m {
        starts.push(masses_of(&PartiteVector::uniform(r), m));
    }
    for step in 1..10 {
        let x0 = step as f64 / 10.0;
        for r in 1..=m {
            let mut y = vec![x0];
            y.extend(std::iter::repeat_n((1.0 - x0) / r as f64, r));
            y.resize(m + 1, 0.0);
            starts.push(y);
        }
    }
    let k = spec.k();
    for n in [2 * k, 3 * k] {
        if n > FINITE_OPT_MAX_ORDER.min(24) {
            continue;
        }
        for shape in finite_opt(spec, n)?.shapes {
            let nn = n as f64;
            let mut y = vec![shape.clique_size() as f64 / nn];
            y.extend(shape.independent_parts().iter().take(m).map(|&s| s as f64 / nn));
            y.resize(m + 1, 0.0);
            starts.push(y);
        }
    }
    let seeds = config.seeds.max(1);
    let random = config.starts.saturating_sub(starts.len());
    for s in 0..seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(s as u64));
        let count = random / seeds + usize::from(s < random % seeds);
        for _ in 0..count {
            let support = rng.gen_range(1..=m);
            let mut y = vec![0.0; m + 1];
            if rng.gen_bool(0.5) {
                y[0] = -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln();
            }
            for slot in y.iter_mut().skip(1).take(support) {
                *slot = -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln();
            }
            let total: f64 = y.iter().sum();
            starts.push(y.into_iter().map(|v| v / total).collect());
        }
    }
    Ok(starts)
}

/// Canonical form of a mass vector: clique mass then parts in decreasing order.
fn canonical(y: &[f64]) -> Vec<f64> {
    let mut parts: Vec<f64> = y[1..].iter().map(|&v| if v > DUST { v } else { 0.0 }).collect();
    parts.sort_by(|a, b| b.total_cmp(a));
    let x0 = 1.0 - parts.iter().sum::<f64>();
    let mut out = vec![x0];
    out.extend(parts);
    out
}

fn snap(spec: &ObjectiveSpec, point: &[f64], value: f64, max_den: i64) -> Result<Option<(PartiteVector, Rational)>> {
    let mut parts = Vec::new();
    for &p in point[1..].iter().filter(|&&p| p > 0.0) {
        let q = nearest_small_fraction(p, max_den);
        if (to_f64(&q) - p).abs() > SNAP_RADIUS || !q.is_positive() {
            return Ok(None);
        }
        parts.push(q);
    }
    let Ok(x) = PartiteVector::from_unsorted(parts) else {
        return Ok(None);
    };
    if (to_f64(x.x0()) - point[0]).abs() > SNAP_RADIUS * point.len() as f64 {
        return Ok(None);
    }
    let exact = lambda_of_vector(spec, &x)?;
    // Float points may sit slightly outside the simplex; allow the first-order change.
    Ok((to_f64(&exact) >= value - SNAP_RADIUS * spec.k() as f64 * point.len() as f64).then_some((x, exact)))
}

/// Multistart projected-gradient search over vectors with at most
/// `max_support` parts. A heuristic: candidates are not certified optimal.
pub fn continuous_opt(spec: &ObjectiveSpec, config: &OptConfig) -> Result<CandidateSet> {
    if config.max_support == 0 || config.max_support > MAX_SUPPORT_LIMIT {
        return Err(Error::InvalidVector(format!(
            "max support {} outside 1..={MAX_SUPPORT_LIMIT}",
            config.max_support
        )));
    }
    let form = MassForm::new(spec);
    let starts = starting_points(spec, config)?;
    let mut finals: Vec<(f64, Vec<f64>)> = starts
        .par_iter()
        .map(|s| {
            let y = local_search(&form, s.clone());
            (form.value(&y), canonical(&y))
        })
        .collect();
    finals.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.iter().zip(&b.1).fold(std::cmp::Ordering::Equal, |o, (p, q)| o.then(p.total_cmp(q)))));

    let mut clusters: Vec<(f64, Vec<f64>, usize)> = Vec::new();
    for (value, point) in finals {
        let near = clusters.iter_mut().find(|(_, c, _)| {
            c.iter().zip(&point).all(|(a, b)| (a - b).abs() <= CLUSTER_RADIUS)
        });
        match near {
            Some(cluster) => cluster.2 += 1,
            None => clusters.push((value, point, 1)),
        }
    }

    let mut candidates = Vec::new();
    for (value, point, hits) in clusters {
        let mut masses = vec![point[0]];
        masses.extend(point[1..].iter().copied());
        let residual = form.residual(&masses);
        if residual > RESIDUAL_TOLERANCE {
            continue;
        }
        let snapped = snap(spec, &point, value, config.snap_denominator)?;
        let (exact, exact_lambda, exact_residual) = match snapped {
            Some((x, l)) => {
                let r = lagrange_residual(spec, &x)?;
                (Some(x), Some(l), Some(r))
            }
            None => (None, None, None),
        };
        let parts: Vec<f64> = point[1..].iter().copied().filter(|&p| p > 0.0).collect();
        candidates.push(Candidate {
            x0: point[0],
            parts,
            lambda_approx: value,
            residual_approx: residual,
            hits,
            exact,
            exact_lambda,
            exact_residual,
        });
    }
    let best = candidates.first().map(|c| c.lambda_approx).unwrap_or(0.0);
    let maximisers = candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| best - c.lambda_approx <= VALUE_TOLERANCE)
        .map(|(i, _)| i)
        .collect();
    Ok(CandidateSet {
        objective: spec.describe(),
        config: config.clone(),
        starts_run: starts.len(),
        candidates,
        maximisers,
    })
}

/// Maximiser of the density of a complete bipartite target with parts s ≤ t.
#[derive(Debug, Clone, Serialize)]
pub struct KstSolution {
    pub s: usize,
    pub t: usize,
    /// Weight of the larger part in the optimal two-part vector.
    pub alpha: AlgebraicNumber,
    pub alpha_approx: f64,
    /// h(x) = s x^{t−s+1} − t x^{t−s} + t x − s; its root in (0,1) gives α = 1/(1+x).
    #[serde(serialize_with = "serialize_poly")]
    pub h: UniPoly,
    pub root: Option<AlgebraicNumber>,
    /// Certified bracket on M_{s,t}.
    #[serde(with = "rational::serde_str")]
    pub m_lower: Rational,
    #[serde(with = "rational::serde_str")]
    pub m_upper: Rational,
    /// Certified bracket on the inducibility C(s+t, s)·M_{s,t}.
    #[serde(with = "rational::serde_str")]
    pub inducibility_lower: Rational,
    #[serde(with = "rational::serde_str")]
    pub inducibility_upper: Rational,
    pub inducibility_approx: f64,
    /// 1 − α > 1/(t+1), checked on the isolating interval when s = 1.
    pub small_side_bound: Option<bool>,
}

fn serialize_poly<S: serde::Serializer>(p: &UniPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    let coeffs: Vec<String> = p.coeffs().iter().map(rational::fmt_rational).collect();
    serde::Serialize::serialize(&coeffs, s)
}

/// f_{s,t}(α) = α^s(1−α)^t + α^t(1−α)^s.
pub fn kst_profile(s: usize, t: usize) -> UniPoly {
    let a = UniPoly::x();
    let b = &UniPoly::one() - &a;
    &(&a.pow(s as u32) * &b.pow(t as u32)) + &(&a.pow(t as u32) * &b.pow(s as u32))
}

/// h(x) = s x^{t−s+1} − t x^{t−s} + t x − s.
pub fn kst_h(s: usize, t: usize) -> UniPoly {
    let d = t - s;
    let (si, ti) = (Rational::from_integer(s.into()), Rational::from_integer(t.into()));
    let mut coeffs = vec![Rational::zero(); d + 2];
    coeffs[d + 1] += &si;
    coeffs[d] -= &ti;
    coeffs[1] += &ti;
    coeffs[0] -= &si;
    UniPoly::new(coeffs)
}

/// Bound on |p′| over [0, 1]: Σ |j a_j|.
fn derivative_bound(p: &UniPoly) -> Rational {
    p.derivative().coeffs().iter().map(|c| c.abs()).sum()
}

pub const KST_INTERVAL_BITS: u32 = 40;

pub fn kst_maximiser(s: usize, t: usize) -> Result<KstSolution> {
    if s * t < 2 || s > t {
        return Err(Error::InvalidObjective(format!("K_{{{s},{t}}} needs st >= 2 and s <= t")));
    }
    let f = kst_profile(s, t);
    let h = kst_h(s, t);
    let half = Rational::new(1.into(), 2.into());
    let threshold = if t - s >= 2 { (t - s) * (t - s - 1) / 2 } else { 0 };
    let (alpha, root) = if s >= threshold {
        (AlgebraicNumber::rational(half.clone()), None)
    } else {
        let (zero, one) = (Rational::zero(), Rational::one());
        let roots = h.isolate_roots(&zero, &one)?;
        let inner: Vec<_> = roots.into_iter().filter(|(_, hi)| *hi < one || !h.eval(hi).is_zero()).collect();
        let [(lo, hi)] = inner.as_slice() else {
            return Err(Error::Polynomial(format!("h has {} roots in (0,1), expected one", inner.len())));
        };
        let root = AlgebraicNumber::new(&h, lo.clone(), hi.clone())?.refine(KST_INTERVAL_BITS + 2)?;
        let alpha = match root.as_rational() {
            Some(x) => AlgebraicNumber::rational((Rational::one() + x).recip()),
            None => {
                // α = 1/(1+x): the polynomial α^d h((1−α)/α).
                let d = h.degree().unwrap_or(0) as u32;
                let a = UniPoly::x();
                let b = &UniPoly::one() - &a;
                let mut p = UniPoly::zero();
                for (j, c) in h.coeffs().iter().enumerate() {
                    p = &p + &(&b.pow(j as u32) * &a.pow(d - j as u32)).scale(c);
                }
                let (rlo, rhi) = root.interval();
                let alo = (Rational::one() + rhi).recip();
                let ahi = (Rational::one() + rlo).recip();
                AlgebraicNumber::new(&p, alo, ahi)?.refine(KST_INTERVAL_BITS)?
            }
        };
        (alpha, Some(root))
    };
    let scale = if s == t { half.clone() } else { Rational::one() };
    let (m_lower, m_upper) = match alpha.as_rational() {
        Some(a) => {
            let m = f.eval(&a) * &scale;
            (m.clone(), m)
        }
        None => {
            let (lo, hi) = alpha.interval();
            let base = f.eval(lo).max(f.eval(hi));
            let slack = derivative_bound(&f) * alpha.width();
            (&base * &scale, (base + slack) * &scale)
        }
    };
    let multiplier = from_biguint(binomial((s + t) as u64, s as u64));
    let small_side_bound = (s == 1).then(|| {
        let bound = Rational::new(1.into(), BigInt::from(t + 1));
        Rational::one() - alpha.interval().1 > bound
    });
    let inducibility_lower = &m_lower * &multiplier;
    let inducibility_upper = &m_upper * &multiplier;
    Ok(KstSolution {
        s,
        t,
        alpha_approx: alpha.to_f64(),
        alpha,
        h,
        root,
        inducibility_approx: (to_f64(&inducibility_lower) + to_f64(&inducibility_upper)) / 2.0,
        m_lower,
        m_upper,
        inducibility_lower,
        inducibility_upper,
        small_side_bound,
    })
}

impl KstSolution {
    /// The exact two-part maximiser when α is rational.
    pub fn vector(&self) -> Option<PartiteVector> {
        let a = self.alpha.as_rational()?;
        PartiteVector::from_unsorted(vec![Rational::one() - &a, a]).ok()
    }

    pub fn inducibility(&self) -> Option<Rational> {
        (self.inducibility_lower == self.inducibility_upper).then(|| self.inducibility_lower.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::shape::CompletePartiteShape;
    use crate::perturbation::lambda_f64;
    use crate::rational::rat;

    fn kp(sizes: &[usize]) -> ObjectiveSpec {
        ObjectiveSpec::induced_density(CompletePartiteShape::new(sizes.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn mass_form_matches_enumeration() {
        let masses = [0.15, 0.3, 0.25, 0.2, 0.1];
        for spec in [kp(&[2, 2]), kp(&[3, 1, 1]), kp(&[2, 1, 1, 1]), ObjectiveSpec::complete_partite_sum(3).unwrap()] {
            let form = MassForm::new(&spec);
            let a = form.value(&masses);
            let b = lambda_f64(&spec, &masses);
            assert!((a - b).abs() < 1e-12, "{spec:?}: {a} vs {b}");
            let (_, grad) = form.value_and_gradient(&masses);
            for i in 0..masses.len() {
                let h = 1e-6;
                let mut up = masses;
                up[i] += h;
                let mut down = masses;
                down[i] -= h;
                let fd = (lambda_f64(&spec, &up) - lambda_f64(&spec, &down)) / (2.0 * h);
                assert!((grad[i] - fd).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn finite_scans() {
        let r = finite_opt(&kp(&[2, 2]), 8).unwrap();
        assert_eq!(r.shapes, vec![CompletePartiteShape::new(vec![4, 4]).unwrap()]);
        let r = finite_opt(&kp(&[3]), 10).unwrap();
        assert_eq!(r.shapes, vec![CompletePartiteShape::new(vec![10]).unwrap()]);
        assert_eq!(r.lambda, Rational::one());
        assert!(finite_opt(&kp(&[2, 2]), 41).is_err());
    }

    #[test]
    fn c4_search() {
        let config = OptConfig { max_support: 4, starts: 60, ..OptConfig::default() };
        let set = continuous_opt(&kp(&[2, 2]), &config).unwrap();
        let best = set.best().unwrap();
        assert_eq!(best.exact.as_ref().unwrap(), &PartiteVector::uniform(2));
        assert_eq!(best.exact_lambda, Some(rat(3, 8)));
        assert_eq!(best.exact_residual, Some(Rational::zero()));
        assert_eq!(set.maximisers, vec![0]);
    }

    #[test]
    fn kst_rational_and_algebraic() {
        let r = kst_maximiser(2, 2).unwrap();
        assert_eq!(r.inducibility(), Some(rat(3, 8)));
        let r = kst_maximiser(2, 3).unwrap();
        assert_eq!(r.inducibility(), Some(rat(10, 16)));
        let r = kst_maximiser(1, 4).unwrap();
        assert!(r.alpha.width() <= Rational::new(1.into(), BigInt::one() << KST_INTERVAL_BITS));
        let target = (3.0 + 3f64.sqrt()) / 6.0;
        assert!((r.alpha_approx - target).abs() < 1e-12);
        assert_eq!(r.small_side_bound, Some(true));
        assert!(r.inducibility_upper - r.inducibility_lower < rat(1, 1 << 30));
        assert!(kst_maximiser(1, 1).is_err());
        assert_eq!(kst_maximiser(2, 5).unwrap().alpha.as_rational(), Some(rat(2, 3)));
    }

    #[test]
    fn kst_brackets_match_a_sweep() {
        for t in 1..=10 {
            for s in 1..=t {
                if s * t < 2 {
                    continue;
                }
                let r = kst_maximiser(s, t).unwrap();
                let f = kst_profile(s, t);
                let scale = if s == t { 0.5 } else { 1.0 };
                let sweep = (0..=20_000).map(|i| f.eval_f64(i as f64 / 20_000.0)).fold(0.0, f64::max) * scale;
                assert!(sweep <= to_f64(&r.m_upper) + 1e-12, "K_{{{s},{t}}}");
                assert!(sweep >= to_f64(&r.m_lower) - 1e-6, "K_{{{s},{t}}}");
            }
        }
    }

    #[test]
    fn merge_helper() {
        let s = CompletePartiteShape::new(vec![3, 2, 1]).unwrap();
        assert_eq!(merge_smallest(&s).unwrap().sizes(), &[3, 3]);
        assert!(merge_smallest(&CompletePartiteShape::new(vec![4]).unwrap()).is_none());
    }
}
