//! Strictness of candidate maximisers: the flip-gradient bound (Str1), the
//! vertex-gradient bound (Str2) with its best constant, and the finite-order
//! counterparts on realisations.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::graph::count::{attach, big_lambda_restricted, lambda_graph, lambda_vertex};
use crate::graph::Graph;
use crate::objective::ObjectiveSpec;
use crate::partite::realise::realisation_graph;
use crate::partite::{AttachmentPattern, PartiteVector};
use crate::perturbation::{flip_gradient, vertex_gradient_polynomial};
use crate::poly::UniPoly;
use crate::rational::{self, binomial, from_biguint, simplest_between, Rational};

/// Bisection stops once the bracket on c is at most 2^-BISECTION_BITS wide.
pub const BISECTION_BITS: u32 = 30;

#[derive(Debug, Clone, Serialize)]
pub struct PairGradient {
    pub i1: usize,
    pub i2: usize,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

/// Best constant for one attachment pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum PatternBound {
    /// The right-hand side vanishes identically and the gradient is nonnegative.
    Unconstrained,
    /// Largest certified c (exact when x₀ = 0, snapped bisection otherwise).
    Certified(#[serde(with = "rational::serde_str")] Rational),
    /// The vertex gradient is negative somewhere the right-hand side vanishes.
    Violated,
}

impl PatternBound {
    /// Contribution to the overall constant; `None` means no constraint.
    pub fn constant(&self) -> Option<Rational> {
        match self {
            PatternBound::Unconstrained => None,
            PatternBound::Certified(c) => Some(c.clone()),
            PatternBound::Violated => Some(Rational::zero()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternMargin {
    pub b: Vec<bool>,
    /// Number of parts with equal mass represented by this pattern.
    pub multiplicity: usize,
    #[serde(with = "rational::serde_str")]
    pub min_w: Rational,
    pub bound: PatternBound,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateStrictness {
    pub vector: PartiteVector,
    pub pairs: Vec<PairGradient>,
    #[serde(with = "rational::serde_str")]
    pub c1: Rational,
    pub patterns: Vec<PatternMargin>,
    #[serde(with = "rational::serde_str_opt")]
    pub c2: Option<Rational>,
    /// ∇•_{e_i,1} = 0 for every i in the extended support.
    pub clone_gradients_vanish: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrictnessReport {
    pub objective: String,
    pub candidates: Vec<CandidateStrictness>,
    #[serde(with = "rational::serde_str")]
    pub c1: Rational,
    #[serde(with = "rational::serde_str_opt")]
    pub c2: Option<Rational>,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
    pub pass: bool,
}

/// ∇•• for every unordered pair of indices in supp*(x), diagonal included.
pub fn flip_table(spec: &ObjectiveSpec, x: &PartiteVector) -> Result<Vec<PairGradient>> {
    let support = x.support_star();
    let pairs: Vec<(usize, usize)> = support
        .iter()
        .enumerate()
        .flat_map(|(a, &i)| support[a..].iter().map(move |&j| (i, j)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(i1, i2)| Ok(PairGradient { i1, i2, value: flip_gradient(spec, x, i1, i2)? }))
        .collect()
}

/// Minimum of ∇•• over supp*(x) pairs.
pub fn check_str1(spec: &ObjectiveSpec, x: &PartiteVector) -> Result<Rational> {
    Ok(min_pair(&flip_table(spec, x)?))
}

fn min_pair(pairs: &[PairGradient]) -> Rational {
    pairs.iter().map(|p| p.value.clone()).min().unwrap_or_else(Rational::zero)
}

/// w_i for each i ∈ supp*(x), paired with its index.
pub fn compute_w(x: &PartiteVector, p: &AttachmentPattern) -> Vec<(usize, Rational)> {
    let missing = |j: usize| if p.b[j - 1] { Rational::zero() } else { x.mass(j) };
    x.support_star()
        .into_iter()
        .map(|i| {
            let own = if i > 0 && p.b[i - 1] { x.mass(i) } else { Rational::zero() };
            let rest: Rational = x.support().into_iter().filter(|&j| j != i).map(missing).sum();
            (i, own + rest)
        })
        .collect()
}

fn min_w(x: &PartiteVector, b: &[bool]) -> Rational {
    let p = AttachmentPattern { b: b.to_vec(), alpha: Rational::one() };
    compute_w(x, &p).into_iter().map(|(_, w)| w).min().unwrap_or_else(Rational::zero)
}

/// Patterns up to permutations of equal parts, with the number of patterns
/// each one represents.
fn canonical_patterns(x: &PartiteVector) -> Vec<(Vec<bool>, usize)> {
    let parts = x.parts();
    let mut groups: Vec<usize> = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 && parts[i - 1] == *p {
            *groups.last_mut().expect("group") += 1;
        } else {
            groups.push(1);
        }
    }
    let mut out = vec![(Vec::new(), 1usize)];
    for &size in &groups {
        out = out
            .into_iter()
            .flat_map(|(b, mult)| {
                (0..=size).map(move |ones| {
                    let mut nb = b.clone();
                    nb.extend((0..size).map(|t| t < ones));
                    let choose = binomial(size as u64, ones as u64);
                    (nb, mult * usize::try_from(choose).unwrap_or(usize::MAX))
                })
            })
            .collect();
    }
    out
}

/// Largest c with ∇•_{b,α}λ(x) ≥ c·((1−α)x₀ + min_i w_i) on the admissible α.
pub fn pattern_bound(spec: &ObjectiveSpec, x: &PartiteVector, b: &[bool]) -> Result<(Rational, PatternBound)> {
    let grad = vertex_gradient_polynomial(spec, x, b)?;
    let mw = min_w(x, b);
    let bound = best_constant(&grad, x.x0(), &mw)?;
    Ok((mw, bound))
}

fn best_constant(grad: &UniPoly, x0: &Rational, mw: &Rational) -> Result<PatternBound> {
    let one = Rational::one();
    let zero = Rational::zero();
    if x0.is_zero() {
        let g = grad.eval(&one);
        return Ok(match (mw.is_zero(), g.is_negative()) {
            (true, false) => PatternBound::Unconstrained,
            (true, true) => PatternBound::Violated,
            (false, _) => PatternBound::Certified(g / mw),
        });
    }
    // rhs(α) = x₀(1 − α) + mw, positive on [0, 1).
    let rhs = UniPoly::new(vec![x0 + mw, -x0.clone()]);
    let holds = |c: &Rational| grad.sub_scaled(&rhs, c).nonnegative_on(&zero, &one);
    if !holds(&zero)? {
        return Ok(if mw.is_zero() && grad.eval(&one).is_negative() {
            PatternBound::Violated
        } else {
            PatternBound::Certified(negative_constant(grad, &rhs)?)
        });
    }
    let mut lo = zero.clone();
    let mut hi = grad.eval(&zero) / rhs.eval(&zero);
    if holds(&hi)? {
        return Ok(PatternBound::Certified(hi));
    }
    let width = Rational::new(BigInt::one(), BigInt::one() << BISECTION_BITS);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if holds(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let snapped = simplest_between(&lo, &hi);
    Ok(PatternBound::Certified(if snapped != lo && holds(&snapped)? { snapped } else { lo }))
}

/// Negative best constant when the gradient dips below zero where rhs > 0.
fn negative_constant(grad: &UniPoly, rhs: &UniPoly) -> Result<Rational> {
    let (zero, one) = (Rational::zero(), Rational::one());
    let holds = |c: &Rational| grad.sub_scaled(rhs, c).nonnegative_on(&zero, &one);
    let mut lo = -Rational::one();
    while !holds(&lo)? {
        lo *= Rational::from_integer(2.into());
        if lo < Rational::from_integer((-1i64 << 40).into()) {
            return Ok(lo);
        }
    }
    let mut hi = zero.clone();
    let width = Rational::new(BigInt::one(), BigInt::one() << BISECTION_BITS);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if holds(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Best Str2 constant over all patterns with their per-pattern bounds;
/// `None` when no pattern constrains c.
pub fn str2_patterns(spec: &ObjectiveSpec, x: &PartiteVector) -> Result<(Option<Rational>, Vec<PatternMargin>)> {
    let patterns: Vec<PatternMargin> = canonical_patterns(x)
        .into_par_iter()
        .map(|(b, multiplicity)| {
            let (min_w, bound) = pattern_bound(spec, x, &b)?;
            Ok(PatternMargin { b, multiplicity, min_w, bound })
        })
        .collect::<Result<_>>()?;
    let c2 = patterns.iter().filter_map(|p| p.bound.constant()).min();
    Ok((c2, patterns))
}

pub fn check_str2(spec: &ObjectiveSpec, x: &PartiteVector) -> Result<Option<Rational>> {
    Ok(str2_patterns(spec, x)?.0)
}

fn clone_gradients_vanish(spec: &ObjectiveSpec, x: &PartiteVector) -> Result<bool> {
    for i in x.support_star() {
        let p = AttachmentPattern::clone_of(x, i)?;
        if !vertex_gradient_polynomial(spec, x, &p.b)?.eval(&p.alpha).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn candidate_strictness(spec: &ObjectiveSpec, x: &PartiteVector) -> Result<CandidateStrictness> {
    let pairs = flip_table(spec, x)?;
    let c1 = min_pair(&pairs);
    let (c2, patterns) = str2_patterns(spec, x)?;
    Ok(CandidateStrictness {
        vector: x.clone(),
        pairs,
        c1,
        patterns,
        c2,
        clone_gradients_vanish: clone_gradients_vanish(spec, x)?,
    })
}

/// c = min over candidates of min(Str1, Str2); passes iff c > 0.
pub fn strictness_certificate(spec: &ObjectiveSpec, candidates: &[PartiteVector]) -> Result<StrictnessReport> {
    let reports = candidates.iter().map(|x| candidate_strictness(spec, x)).collect::<Result<Vec<_>>>()?;
    let c1 = reports.iter().map(|r| r.c1.clone()).min().unwrap_or_else(Rational::zero);
    let c2 = reports.iter().filter_map(|r| r.c2.clone()).min();
    let c = match &c2 {
        Some(c2) => c1.clone().min(c2.clone()),
        None => c1.clone(),
    };
    let pass = !reports.is_empty() && c.is_positive();
    Ok(StrictnessReport { objective: spec.describe(), candidates: reports, c1, c2, c, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct FinitePairCheck {
    pub u: usize,
    pub v: usize,
    /// n²(λ(G) − λ(G ⊕ uv)).
    #[serde(with = "rational::serde_str")]
    pub scaled_loss: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiniteAttachCheck {
    pub b: Vec<bool>,
    #[serde(with = "rational::serde_str")]
    pub alpha: Rational,
    /// Fewest edits at the new vertex to make it a clone of an existing vertex.
    pub edits: usize,
    #[serde(with = "rational::serde_str")]
    pub deficit: Rational,
    /// n·deficit/edits, absent for clones.
    #[serde(with = "rational::serde_str_opt")]
    pub ratio: Option<Rational>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiniteStrictnessReport {
    pub n: usize,
    pub pairs: Vec<FinitePairCheck>,
    pub attachments: Vec<FiniteAttachCheck>,
    #[serde(with = "rational::serde_str")]
    pub c1: Rational,
    #[serde(with = "rational::serde_str_opt")]
    pub c2: Option<Rational>,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
    pub pass: bool,
}

/// Both finite-order conditions on G_{n,x}: every flip loses at least c/n², and
/// every wrongly attached vertex loses at least c·edits/n in local density.
pub fn finite_strictness_check(spec: &ObjectiveSpec, x: &PartiteVector, n: usize) -> Result<FiniteStrictnessReport> {
    let (g, layout) = realisation_graph(n, x)?;
    let value = lambda_graph(spec, &g)?;
    let norm = from_biguint(binomial(n as u64, spec.k() as u64));
    let nn = Rational::from_integer(n.into());

    let mut classes: Vec<Vec<usize>> = layout.parts.iter().filter(|p| !p.is_empty()).cloned().collect();
    if !layout.clique.is_empty() {
        classes.push(layout.clique.clone());
    }
    let mut reps = Vec::new();
    for (a, ca) in classes.iter().enumerate() {
        if ca.len() >= 2 {
            reps.push((ca[0], ca[1]));
        }
        for cb in &classes[a + 1..] {
            reps.push((ca[0], cb[0]));
        }
    }
    let pairs: Vec<FinitePairCheck> = reps
        .into_par_iter()
        .map(|(u, v)| {
            let flipped = g.flip(u, v)?;
            let loss = (big_lambda_restricted(spec, &g, &[u, v], &[])?
                - big_lambda_restricted(spec, &flipped, &[u, v], &[])?)
                / &norm;
            Ok(FinitePairCheck { u, v, scaled_loss: loss * &nn * &nn })
        })
        .collect::<Result<_>>()?;

    let alphas: Vec<Rational> = if layout.clique.is_empty() {
        vec![Rational::one()]
    } else {
        let q = layout.clique.len() as i64;
        (0..=q).map(|j| Rational::new(j.into(), q.into())).collect()
    };
    let m = layout.parts.len();
    let jobs: Vec<(Vec<bool>, Rational)> = (0u64..1 << m)
        .flat_map(|mask| {
            let b: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
            alphas.iter().map(move |a| (b.clone(), a.clone()))
        })
        .collect();
    let attachments: Vec<FiniteAttachCheck> = jobs
        .into_par_iter()
        .map(|(b, alpha)| {
            let h = attach(&g, &layout, &b, &alpha)?;
            let deficit = &value - lambda_vertex(spec, &h, n)?;
            let edits = clone_edits(&g, &classes, h.neighbours(n));
            let ratio = (edits > 0).then(|| &deficit * &nn / Rational::from_integer(edits.into()));
            Ok(FiniteAttachCheck { b, alpha, edits, deficit, ratio })
        })
        .collect::<Result<_>>()?;

    let c1 = pairs.iter().map(|p| p.scaled_loss.clone()).min().unwrap_or_else(Rational::zero);
    let c2 = attachments.iter().filter_map(|a| a.ratio.clone()).min();
    let c = match &c2 {
        Some(c2) => c1.clone().min(c2.clone()),
        None => c1.clone(),
    };
    Ok(FiniteStrictnessReport { n, pairs, attachments, c1, c2, pass: c.is_positive(), c })
}

/// Fewest changes to `row` turning the new vertex into a twin of some vertex of `g`.
fn clone_edits(g: &Graph, classes: &[Vec<usize>], row: u64) -> usize {
    classes
        .iter()
        .map(|class| {
            let twin = g.neighbours(class[0]);
            (row ^ twin).count_ones() as usize
        })
        .min()
        .unwrap_or(0)
}
