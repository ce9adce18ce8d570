//! Exact normalised edit distance between graphs of equal order.

use num_traits::Zero;

use super::Graph;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const EDIT_MAX_ORDER: usize = 9;

/// Minimum over bijections of the number of disagreeing pairs.
pub fn edit_pairs_exact(g: &Graph, h: &Graph) -> Result<usize> {
    let n = g.order();
    if n != h.order() {
        return Err(Error::OrderMismatch(n, h.order()));
    }
    if n > EDIT_MAX_ORDER {
        return Err(Error::TooManyVertices { n, limit: EDIT_MAX_ORDER });
    }
    // Assign high-degree vertices of g first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut search = Search {
        g,
        h,
        order,
        image: vec![0; n],
        best: g.symmetric_difference(h)?,
    };
    search.extend(0, 0, 0);
    Ok(search.best)
}

/// δ̂₁(G, H) = 2 · min |E(H) △ E(σG)| / n².
pub fn edit_distance_exact(g: &Graph, h: &Graph) -> Result<Rational> {
    let pairs = edit_pairs_exact(g, h)?;
    let n = g.order();
    if n == 0 {
        return Ok(Rational::zero());
    }
    Ok(Rational::new((2 * pairs).into(), (n * n).into()))
}

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    order: Vec<usize>,
    image: Vec<usize>,
    best: usize,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize, used: u64, cost: usize) {
        if cost >= self.best {
            return;
        }
        let n = self.order.len();
        if depth == n {
            self.best = cost;
            return;
        }
        let v = self.order[depth];
        let mut tried: Vec<usize> = Vec::new();
        for w in 0..n {
            if used >> w & 1 == 1 {
                continue;
            }
            // Skip w if it is interchangeable with an already tried candidate.
            if tried.iter().any(|&t| self.twins(t, w, used)) {
                continue;
            }
            tried.push(w);
            let mut extra = 0;
            for d in 0..depth {
                let u = self.order[d];
                if self.g.has_edge(u, v) != self.h.has_edge(self.image[u], w) {
                    extra += 1;
                }
            }
            self.image[v] = w;
            self.extend(depth + 1, used | 1 << w, cost + extra);
        }
    }

    /// Unused vertices a, b of h are interchangeable if swapping them fixes h.
    fn twins(&self, a: usize, b: usize, _used: u64) -> bool {
        let na = self.h.neighbours(a) & !(1 << b);
        let nb = self.h.neighbours(b) & !(1 << a);
        na == nb
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn simple_distances() {
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(edit_distance_exact(&c5, &c5).unwrap(), rat(0, 1));
        let relabelled = Graph::from_edges(5, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(edit_distance_exact(&c5, &relabelled).unwrap(), rat(0, 1));
        let e4 = Graph::empty(4).unwrap();
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(edit_distance_exact(&e4, &k4).unwrap(), rat(3, 4));
        assert!(edit_distance_exact(&e4, &c5).is_err());
    }
}
