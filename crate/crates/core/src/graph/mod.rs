//! Simple graphs on at most 64 vertices with one bitset row per vertex.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub mod brute;
pub mod canon;
pub mod count;
pub mod edit;
pub mod shape;

pub const MAX_VERTICES: usize = 64;

/// Bit position of the pair `{a, b}` in a labelled code (upper triangle,
/// column-major): pair `(a, b)` with `a < b` sits at `b(b-1)/2 + a`.
#[inline]
pub fn pair_bit(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    b * (b - 1) / 2 + a
}

#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Graph> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, limit: MAX_VERTICES });
        }
        Ok(Graph { n, rows: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        let all = full_mask(n);
        for v in 0..n {
            g.rows[v] = all & !(1u64 << v);
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Complete partite graph with the given part sizes, parts laid out in order.
    pub fn complete_partite(sizes: &[usize]) -> Result<Graph> {
        let n = sizes.iter().sum();
        let mut g = Graph::complete(n)?;
        let mut start = 0;
        for &s in sizes {
            for u in start..start + s {
                for v in u + 1..start + s {
                    g.set_edge(u, v, false);
                }
            }
            start += s;
        }
        Ok(g)
    }

    /// Graph on `n <= 11` vertices from a labelled code (see [`pair_bit`]).
    pub fn from_code(n: usize, code: u64) -> Graph {
        let mut g = Graph { n, rows: vec![0; n] };
        for b in 1..n {
            for a in 0..b {
                if code >> pair_bit(a, b) & 1 == 1 {
                    g.set_edge(a, b, true);
                }
            }
        }
        g
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            let higher = self.rows[u] & !low_mask(u + 1);
            BitIter(higher).map(move |v| (u, v))
        })
    }

    pub fn set_edge(&mut self, u: usize, v: usize, on: bool) {
        if on {
            self.rows[u] |= 1 << v;
            self.rows[v] |= 1 << u;
        } else {
            self.rows[u] &= !(1 << v);
            self.rows[v] &= !(1 << u);
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfPair(u));
        }
        Ok(())
    }

    /// `G ⊕ xy`: the pair's adjacency toggled.
    pub fn flip(&self, x: usize, y: usize) -> Result<Graph> {
        self.check_pair(x, y)?;
        let mut g = self.clone();
        let on = !g.has_edge(x, y);
        g.set_edge(x, y, on);
        Ok(g)
    }

    pub fn complement(&self) -> Graph {
        let all = full_mask(self.n);
        let rows = (0..self.n).map(|v| !self.rows[v] & all & !(1 << v)).collect();
        Graph { n: self.n, rows }
    }

    /// Induced subgraph on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph { n: vertices.len(), rows: vec![0; vertices.len()] };
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j, true);
                }
            }
        }
        g
    }

    /// Labelled code of the subgraph induced on `vertices` (at most 11).
    #[inline]
    pub fn induced_code(&self, vertices: &[usize]) -> u64 {
        let mut code = 0u64;
        for (j, &v) in vertices.iter().enumerate() {
            let row = self.rows[v];
            let base = j * j.saturating_sub(1) / 2;
            for (i, &u) in vertices[..j].iter().enumerate() {
                code |= (row >> u & 1) << (base + i);
            }
        }
        code
    }

    /// Labelled code of the whole graph (`n <= 11`).
    pub fn code(&self) -> u64 {
        let all: Vec<usize> = (0..self.n).collect();
        self.induced_code(&all)
    }

    pub fn remove_vertex(&self, v: usize) -> Result<Graph> {
        self.check_vertex(v)?;
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        Ok(self.induced(&keep))
    }

    /// Appends a vertex adjacent to the vertices in `neighbours`.
    pub fn add_vertex(&self, neighbours: u64) -> Result<Graph> {
        if self.n + 1 > MAX_VERTICES {
            return Err(Error::TooManyVertices { n: self.n + 1, limit: MAX_VERTICES });
        }
        let mut g = self.clone();
        let u = g.n;
        g.n += 1;
        g.rows.push(0);
        for v in BitIter(neighbours & full_mask(self.n)) {
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    /// Makes `target` a clone of `source` (twins, non-adjacent).
    pub fn clone_vertex(&self, source: usize, target: usize) -> Result<Graph> {
        self.check_pair(source, target)?;
        let mut g = self.clone();
        let new_row = self.rows[source] & !(1 << target);
        for v in 0..self.n {
            if v == target {
                continue;
            }
            g.set_edge(target, v, new_row >> v & 1 == 1);
        }
        Ok(g)
    }

    /// Number of pairs on which the two graphs differ.
    pub fn symmetric_difference(&self, other: &Graph) -> Result<usize> {
        if self.n != other.n {
            return Err(Error::OrderMismatch(self.n, other.n));
        }
        let twice: usize = (0..self.n)
            .map(|v| (self.rows[v] ^ other.rows[v]).count_ones() as usize)
            .sum();
        Ok(twice / 2)
    }

    /// Parses the `n <count>` / `u v` text format.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let mut it = header.split_whitespace();
        let n = match (it.next(), it.next(), it.next()) {
            (Some("n"), Some(c), None) => c
                .parse::<usize>()
                .map_err(|_| Error::Parse { line, msg: format!("bad vertex count {c:?}") })?,
            _ => return Err(Error::Parse { line, msg: "expected \"n <count>\"".into() }),
        };
        let mut g = Graph::empty(n)?;
        for (line, l) in lines {
            let nums: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse { line, msg: format!("bad edge line {l:?}") })?;
            let [u, v] = nums[..] else {
                return Err(Error::Parse { line, msg: format!("expected two vertices, got {l:?}") });
            };
            g.check_pair(u, v).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

impl FromStr for Graph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Graph> {
        Graph::parse(s)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson { n: self.n, edges: self.edges().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(d)?;
        Graph::from_edges(raw.n, &raw.edges).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn low_mask(n: usize) -> u64 {
    full_mask(n)
}

/// Iterates set bit positions, lowest first.
#[derive(Clone, Copy)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;
    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// All `k`-subsets of `0..n` in lexicographic order, as index arrays.
pub struct Subsets {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Subsets {
        Subsets { n, cur: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - k + i {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flip_is_an_involution() {
        let g = Graph::cycle(5).unwrap();
        assert_eq!(g.flip(0, 2).unwrap().flip(0, 2).unwrap(), g);
        assert_eq!(Graph::empty(2).unwrap().flip(0, 1).unwrap(), Graph::complete(2).unwrap());
        let p3 = Graph::complete(3).unwrap().flip(0, 1).unwrap();
        assert_eq!(p3.edge_count(), 2);
        assert!(matches!(g.flip(1, 1), Err(Error::SelfPair(1))));
    }

    #[test]
    fn text_round_trip() {
        let text = "# a comment\nn 4\n\n2 3\n0 1 # trailing\n1 2\n";
        let g = Graph::parse(text).unwrap();
        assert_eq!(g.to_text(), "n 4\n0 1\n1 2\n2 3\n");
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        assert!(Graph::parse("n 3\n0 3\n").is_err());
        assert!(Graph::parse("m 3\n").is_err());
    }

    #[test]
    fn codes_round_trip() {
        let g = Graph::cycle(6).unwrap();
        assert_eq!(Graph::from_code(6, g.code()), g);
        let sub = g.induced(&[0, 1, 3]);
        assert_eq!(sub.code(), g.induced_code(&[0, 1, 3]));
    }

    #[test]
    fn subsets_are_counted() {
        assert_eq!(Subsets::new(6, 3).count(), 20);
        assert_eq!(Subsets::new(3, 0).count(), 1);
        assert_eq!(Subsets::new(2, 3).count(), 0);
    }

    #[test]
    fn cloning_makes_twins() {
        let g = Graph::cycle(5).unwrap().clone_vertex(0, 2).unwrap();
        assert_eq!(g.neighbours(2), g.neighbours(0));
        assert!(!g.has_edge(0, 2));
    }
}
