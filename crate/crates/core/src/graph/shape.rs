//! Complete partite graphs and their shapes.

use serde::{Deserialize, Serialize};

use super::{full_mask, BitIter, Graph};
use crate::error::{Error, Result};

/// Part sizes of a complete partite graph, non-increasing. Parts of size one
/// together form the clique of universal vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct CompletePartiteShape {
    sizes: Vec<usize>,
}

impl CompletePartiteShape {
    pub fn new(mut sizes: Vec<usize>) -> Result<Self> {
        if sizes.contains(&0) {
            return Err(Error::InvalidPartition("part sizes must be positive".into()));
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CompletePartiteShape { sizes })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn order(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Parts of size at least two.
    pub fn independent_parts(&self) -> &[usize] {
        let end = self.sizes.iter().position(|&s| s < 2).unwrap_or(self.sizes.len());
        &self.sizes[..end]
    }

    /// Number of universal vertices (parts of size one).
    pub fn clique_size(&self) -> usize {
        self.sizes.len() - self.independent_parts().len()
    }

    pub fn graph(&self) -> Result<Graph> {
        Graph::complete_partite(&self.sizes)
    }
}

impl TryFrom<Vec<usize>> for CompletePartiteShape {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        CompletePartiteShape::new(v)
    }
}

impl From<CompletePartiteShape> for Vec<usize> {
    fn from(s: CompletePartiteShape) -> Vec<usize> {
        s.sizes
    }
}

/// Parts of a complete partite graph as vertex lists, largest first
/// (ties by smallest vertex), or `None` if the graph is not complete partite.
pub fn complete_partite_layout(g: &Graph) -> Option<Vec<Vec<usize>>> {
    let n = g.order();
    let all = full_mask(n);
    let mut seen = 0u64;
    let mut parts = Vec::new();
    for v in 0..n {
        if seen >> v & 1 == 1 {
            continue;
        }
        let class = !g.neighbours(v) & all;
        for u in BitIter(class) {
            if !g.neighbours(u) & all != class {
                return None;
            }
        }
        seen |= class;
        parts.push(BitIter(class).collect::<Vec<_>>());
    }
    parts.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    Some(parts)
}

pub fn complete_partite_shape_of(g: &Graph) -> Option<CompletePartiteShape> {
    let parts = complete_partite_layout(g)?;
    Some(CompletePartiteShape { sizes: parts.iter().map(Vec::len).collect() })
}

/// Vertex layout of a complete partite graph: numbered parts `V_1..V_m`
/// (any sizes, possibly empty) plus the clique `V_0` of universal vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartiteLayout {
    pub clique: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
}

impl PartiteLayout {
    /// Parts numbered consecutively from vertex 0, clique vertices last.
    pub fn from_sizes(parts: &[usize], clique: usize) -> PartiteLayout {
        let mut next = 0;
        let mut take = |s: usize| {
            let v: Vec<usize> = (next..next + s).collect();
            next += s;
            v
        };
        let parts = parts.iter().map(|&s| take(s)).collect();
        let clique = take(clique);
        PartiteLayout { clique, parts }
    }

    pub fn order(&self) -> usize {
        self.clique.len() + self.parts.iter().map(Vec::len).sum::<usize>()
    }

    pub fn part_masks(&self) -> Vec<u64> {
        self.parts.iter().map(|p| p.iter().fold(0u64, |m, &v| m | 1 << v)).collect()
    }

    pub fn clique_mask(&self) -> u64 {
        self.clique.iter().fold(0u64, |m, &v| m | 1 << v)
    }

    pub fn graph(&self) -> Result<Graph> {
        let n = self.order();
        let mut g = Graph::complete(n)?;
        for part in &self.parts {
            for (i, &a) in part.iter().enumerate() {
                for &b in &part[i + 1..] {
                    g.set_edge(a, b, false);
                }
            }
        }
        Ok(g)
    }

    /// Part index (1-based) of each vertex, 0 for clique vertices.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.order()];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                out[v] = i + 1;
            }
        }
        out
    }

    /// Checks that `g` is exactly the complete partite graph of this layout.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let n = g.order();
        let mut seen = 0u64;
        for &v in self.clique.iter().chain(self.parts.iter().flatten()) {
            if v >= n || seen >> v & 1 == 1 {
                return Err(Error::InvalidPartition(format!("vertex {v} missing or repeated")));
            }
            seen |= 1 << v;
        }
        if seen != full_mask(n) {
            return Err(Error::InvalidPartition("layout does not cover the graph".into()));
        }
        if self.graph()? != *g {
            return Err(Error::InvalidPartition("graph does not match the layout".into()));
        }
        Ok(())
    }

    pub fn shape(&self) -> Result<CompletePartiteShape> {
        let mut sizes: Vec<usize> = self.parts.iter().map(Vec::len).filter(|&s| s > 0).collect();
        sizes.extend(std::iter::repeat_n(1, self.clique.len()));
        CompletePartiteShape::new(sizes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts_build_graphs() {
        let l = PartiteLayout::from_sizes(&[2, 3], 2);
        let g = l.graph().unwrap();
        l.check(&g).unwrap();
        assert_eq!(l.shape().unwrap().sizes(), &[3, 2, 1, 1]);
        assert_eq!(complete_partite_shape_of(&g).unwrap().sizes(), &[3, 2, 1, 1]);
        assert!(l.check(&g.flip(0, 1).unwrap()).is_err());
        assert_eq!(l.labels(), vec![1, 1, 2, 2, 2, 0, 0]);
    }

    #[test]
    fn recognises_shapes() {
        let k32 = Graph::complete_partite(&[2, 3]).unwrap();
        assert_eq!(complete_partite_shape_of(&k32).unwrap().sizes(), &[3, 2]);
        let k5 = Graph::complete(5).unwrap();
        assert_eq!(complete_partite_shape_of(&k5).unwrap().sizes(), &[1; 5]);
        assert!(complete_partite_shape_of(&Graph::cycle(5).unwrap()).is_none());
        let s = CompletePartiteShape::new(vec![1, 4, 1, 2]).unwrap();
        assert_eq!(s.independent_parts(), &[4, 2]);
        assert_eq!(s.clique_size(), 2);
    }
}
