//! Zykov symmetrisation: the full-graph procedure that ends in a complete
//! partite graph, and the single-vertex procedure that makes one vertex
//! complete or empty to every part.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::count::big_lambda;
use crate::graph::shape::{complete_partite_layout, complete_partite_shape_of, CompletePartiteShape};
use crate::graph::Graph;
use crate::objective::ObjectiveSpec;
use crate::rational::{self, binomial, from_biguint, Rational};

/// Largest order accepted by the full procedure.
pub const SYMMETRISE_MAX_ORDER: usize = 24;

#[derive(Debug, Clone, Serialize)]
pub struct SymmetrisationStep {
    /// The vertex whose neighbourhood is copied.
    pub source: usize,
    /// The vertex that becomes a twin of `source`.
    pub target: usize,
    #[serde(with = "rational::serde_str")]
    pub lambda_before: Rational,
    #[serde(with = "rational::serde_str")]
    pub lambda_after: Rational,
    pub pairs_edited: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetrisationTrace {
    pub steps: Vec<SymmetrisationStep>,
    #[serde(with = "rational::serde_str")]
    pub initial_lambda: Rational,
    #[serde(with = "rational::serde_str")]
    pub final_lambda: Rational,
    pub final_graph: Graph,
    pub final_shape: Option<CompletePartiteShape>,
    /// Whether every step kept λ from decreasing.
    pub monotone: bool,
}

/// λ evaluator with the normalisation fixed for the order of `g`.
struct Evaluator<'a> {
    spec: &'a ObjectiveSpec,
    norm: Rational,
}

impl<'a> Evaluator<'a> {
    fn new(spec: &'a ObjectiveSpec, n: usize) -> Result<Self> {
        if n < spec.k() {
            return Err(Error::TooFewVertices { n, k: spec.k() });
        }
        Ok(Evaluator { spec, norm: from_biguint(binomial(n as u64, spec.k() as u64)) })
    }

    fn lambda(&self, g: &Graph) -> Result<Rational> {
        Ok(big_lambda(self.spec, g)? / &self.norm)
    }
}

enum Choice {
    /// Clone the first candidate's source over its target.
    First,
    Second,
}

/// Picks the clone with larger λ; ties go to `tie`.
fn choose(first: &Rational, second: &Rational, tie: Choice) -> Choice {
    match first.cmp(second) {
        std::cmp::Ordering::Greater => Choice::First,
        std::cmp::Ordering::Less => Choice::Second,
        std::cmp::Ordering::Equal => tie,
    }
}

/// Full symmetrisation: repeatedly merges two non-adjacent twin classes by
/// cloning, choosing at each step the clone with larger λ.
pub fn symmetrise_full(spec: &ObjectiveSpec, g: &Graph) -> Result<SymmetrisationTrace> {
    let n = g.order();
    if n > SYMMETRISE_MAX_ORDER {
        return Err(Error::TooManyVertices { n, limit: SYMMETRISE_MAX_ORDER });
    }
    let eval = Evaluator::new(spec, n)?;
    let eligible = spec.is_symmetrisable_form();
    let mut g = g.clone();
    let initial = eval.lambda(&g)?;
    let mut current = initial.clone();
    let mut classes = twin_classes(&g);
    let mut steps = Vec::new();
    let limit = n * n * n + 1;
    while let Some((i, j)) = violating_pair(&g, &classes) {
        while !classes[i].is_empty() && !classes[j].is_empty() {
            if steps.len() >= limit {
                return Err(Error::NoTermination(limit));
            }
            let x = classes[i][0];
            let y = classes[j][0];
            let g_xy = g.clone_vertex(x, y)?;
            let g_yx = g.clone_vertex(y, x)?;
            let (l_xy, l_yx) = rayon::join(|| eval.lambda(&g_xy), || eval.lambda(&g_yx));
            let (l_xy, l_yx) = (l_xy?, l_yx?);
            let tie = if classes[i].len() >= classes[j].len() { Choice::First } else { Choice::Second };
            let (next, value, source, target, from, to) = match choose(&l_xy, &l_yx, tie) {
                Choice::First => (g_xy, l_xy, x, y, j, i),
                Choice::Second => (g_yx, l_yx, y, x, i, j),
            };
            if value < current {
                // The better clone decreases λ, hence so does the other one.
                return Err(Error::NoMonotoneClone { step: steps.len() });
            }
            debug_assert!(!eligible || value >= current);
            let pairs_edited = g.symmetric_difference(&next)?;
            steps.push(SymmetrisationStep {
                source,
                target,
                lambda_before: current.clone(),
                lambda_after: value.clone(),
                pairs_edited,
            });
            classes[from].retain(|&v| v != target);
            classes[to].push(target);
            classes[to].sort_unstable();
            g = next;
            current = value;
        }
        classes.retain(|c| !c.is_empty());
        classes = merge_twins(&g, classes);
    }
    let final_shape = complete_partite_shape_of(&g);
    Ok(SymmetrisationTrace { steps, initial_lambda: initial, final_lambda: current, final_graph: g, final_shape, monotone: true })
}

/// Twin classes (identical neighbourhoods), ordered by smallest vertex.
fn twin_classes(g: &Graph) -> Vec<Vec<usize>> {
    let singletons = (0..g.order()).map(|v| vec![v]).collect();
    merge_twins(g, singletons)
}

fn merge_twins(g: &Graph, classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for class in classes {
        let rep = class[0];
        match out.iter_mut().find(|c| g.neighbours(c[0]) == g.neighbours(rep)) {
            Some(existing) => {
                existing.extend(class);
                existing.sort_unstable();
            }
            None => out.push(class),
        }
    }
    out.sort_by_key(|c| c[0]);
    out
}

/// First pair of non-adjacent classes, scanning classes by decreasing size
/// (ties by smallest vertex).
fn violating_pair(g: &Graph, classes: &[Vec<usize>]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&a, &b| classes[b].len().cmp(&classes[a].len()).then(classes[a][0].cmp(&classes[b][0])));
    for (pos, &a) in order.iter().enumerate() {
        for &b in &order[pos + 1..] {
            if !g.has_edge(classes[a][0], classes[b][0]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Single-vertex symmetrisation: for every part V_i of G − z, moves vertices
/// between V_i ∩ N(z) and V_i ∖ N(z) one pair at a time until z is complete or
/// empty to V_i.
pub fn symmetrise_vertex(spec: &ObjectiveSpec, g: &Graph, z: usize) -> Result<SymmetrisationTrace> {
    let n = g.order();
    if z >= n {
        return Err(Error::VertexOutOfRange { vertex: z, n });
    }
    let eval = Evaluator::new(spec, n)?;
    let rest = g.remove_vertex(z)?;
    let parts: Vec<Vec<usize>> = complete_partite_layout(&rest)
        .ok_or(Error::NotCompletePartite)?
        .into_iter()
        .map(|p| p.into_iter().map(|v| if v >= z { v + 1 } else { v }).collect())
        .collect();
    let mut g = g.clone();
    let initial = eval.lambda(&g)?;
    let mut current = initial.clone();
    let mut steps = Vec::new();
    for part in parts {
        let (mut near, mut far): (Vec<usize>, Vec<usize>) = part.into_iter().partition(|&v| g.has_edge(v, z));
        while !near.is_empty() && !far.is_empty() {
            let (x, y) = (near[0], far[0]);
            // G_xy: y copies x's adjacency to z; G_yx: x copies y's.
            let mut g_xy = g.clone();
            g_xy.set_edge(y, z, true);
            let mut g_yx = g.clone();
            g_yx.set_edge(x, z, false);
            let (l_xy, l_yx) = rayon::join(|| eval.lambda(&g_xy), || eval.lambda(&g_yx));
            let (l_xy, l_yx) = (l_xy?, l_yx?);
            let tie = if near.len() >= far.len() { Choice::First } else { Choice::Second };
            let (next, value, source, target) = match choose(&l_xy, &l_yx, tie) {
                Choice::First => {
                    far.remove(0);
                    near.push(y);
                    (g_xy, l_xy, x, y)
                }
                Choice::Second => {
                    near.remove(0);
                    far.push(x);
                    (g_yx, l_yx, y, x)
                }
            };
            if value < current {
                return Err(Error::NoMonotoneClone { step: steps.len() });
            }
            steps.push(SymmetrisationStep {
                source,
                target,
                lambda_before: current.clone(),
                lambda_after: value.clone(),
                pairs_edited: g.symmetric_difference(&next)?,
            });
            g = next;
            current = value;
        }
    }
    let final_shape = complete_partite_shape_of(&g);
    Ok(SymmetrisationTrace { steps, initial_lambda: initial, final_lambda: current, final_graph: g, final_shape, monotone: true })
}

impl SymmetrisationTrace {
    /// λ never decreases along the recorded steps.
    pub fn is_monotone(&self) -> bool {
        self.steps.iter().all(|s| s.lambda_after >= s.lambda_before)
    }

    /// Total number of pairs changed.
    pub fn total_edits(&self) -> usize {
        self.steps.iter().map(|s| s.pairs_edited).sum()
    }

    pub fn gain(&self) -> Rational {
        if self.steps.is_empty() {
            return Rational::zero();
        }
        &self.final_lambda - &self.initial_lambda
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::count::big_lambda_restricted;
    use crate::graph::shape::CompletePartiteShape;
    use crate::rational::rat;

    fn kp(sizes: &[usize]) -> ObjectiveSpec {
        ObjectiveSpec::induced_density(CompletePartiteShape::new(sizes.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn complete_partite_input_is_fixed() {
        let g = Graph::complete_partite(&[3, 2, 2]).unwrap();
        let t = symmetrise_full(&kp(&[2, 2]), &g).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.final_graph, g);
    }

    #[test]
    fn five_cycle() {
        let spec = kp(&[2, 2]);
        let c5 = Graph::cycle(5).unwrap();
        let t = symmetrise_full(&spec, &c5).unwrap();
        assert!(t.is_monotone());
        assert!(t.final_shape.is_some());
        assert!(t.steps.len() <= 10);
        assert!(t.steps.iter().all(|s| s.pairs_edited <= 4));
        assert_eq!(t.final_lambda, rat(3, 5));
        assert_eq!(t.final_shape.unwrap().sizes(), &[3, 2]);
    }

    #[test]
    fn vertex_procedure() {
        let spec = kp(&[2, 2]);
        let mut g = Graph::complete_partite(&[2, 2]).unwrap().add_vertex(0b0101).unwrap();
        g.set_edge(0, 4, true);
        let t = symmetrise_vertex(&spec, &g, 4).unwrap();
        assert!(t.is_monotone());
        assert!(t.steps.iter().all(|s| s.pairs_edited == 1));
        let nz = t.final_graph.neighbours(4);
        for part in [0b0011u64, 0b1100] {
            assert!(nz & part == 0 || nz & part == part);
        }
        assert!(symmetrise_vertex(&spec, &Graph::cycle(6).unwrap(), 0).is_err());
    }

    #[test]
    fn four_kinds_decomposition() {
        // Λ(G) splits over k-sets by membership of x and y; for an eligible
        // spec, cloning towards the larger one-sided sum never decreases λ.
        let spec = kp(&[2, 1]);
        let g = Graph::from_edges(7, &[(0, 2), (0, 3), (1, 3), (1, 4), (2, 5), (4, 6), (5, 6), (3, 6)]).unwrap();
        let (x, y) = (0, 1);
        let fx = big_lambda_restricted(&spec, &g, &[x], &[y]).unwrap();
        let fy = big_lambda_restricted(&spec, &g, &[y], &[x]).unwrap();
        let both = big_lambda_restricted(&spec, &g, &[x, y], &[]).unwrap();
        let neither = big_lambda_restricted(&spec, &g, &[], &[x, y]).unwrap();
        let total = big_lambda(&spec, &g).unwrap();
        assert_eq!(&fx + &fy + &both + &neither, total);
        let (src, dst) = if fx >= fy { (x, y) } else { (y, x) };
        assert!(big_lambda(&spec, &g.clone_vertex(src, dst).unwrap()).unwrap() >= total);
    }
}
