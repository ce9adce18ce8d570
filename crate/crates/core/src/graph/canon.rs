//! Canonical labels for graphs on at most eight vertices.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use super::{pair_bit, Graph};

pub const MAX_CANONICAL_ORDER: usize = 8;

/// Isomorphism-class label: order plus the minimal code over all relabellings
/// compatible with a colour refinement. The code stores pair `{a, b}` at bit
/// `C(n,2) - 1 - pair_bit(a, b)`, so earlier vertices are more significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey {
    pub order: u8,
    pub code: u64,
}

impl CanonicalKey {
    pub fn graph(&self) -> Graph {
        let n = self.order as usize;
        let total = crate::graph::pair_count(n);
        let mut g = Graph::empty(n).expect("order at most 8");
        for b in 1..n {
            for a in 0..b {
                if self.code >> (total - 1 - pair_bit(a, b)) & 1 == 1 {
                    g.set_edge(a, b, true);
                }
            }
        }
        g
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:x}", self.order, self.code)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn canonical_key(g: &Graph) -> Result<CanonicalKey> {
    let n = g.order();
    if n > MAX_CANONICAL_ORDER {
        return Err(Error::TooManyVertices { n, limit: MAX_CANONICAL_ORDER });
    }
    Ok(CanonicalKey { order: n as u8, code: minimal_code(g) })
}

/// Canonical key of the graph with labelled code `code` on `n` vertices.
pub fn canonical_key_of_code(n: usize, code: u64) -> CanonicalKey {
    CanonicalKey { order: n as u8, code: minimal_code(&Graph::from_code(n, code)) }
}

fn refine(g: &Graph) -> Vec<u32> {
    let n = g.order();
    let mut colour: Vec<u32> = (0..n).map(|v| g.degree(v) as u32).collect();
    let mut classes = distinct(&colour);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = (0..n).filter(|&u| g.has_edge(v, u)).map(|u| colour[u]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| sorted.binary_search(s).unwrap() as u32)
            .collect();
        let count = sorted.len();
        colour = next;
        if count == classes {
            return colour;
        }
        classes = count;
    }
}

fn distinct(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn minimal_code(g: &Graph) -> u64 {
    let n = g.order();
    if n <= 1 {
        return 0;
    }
    let colour = refine(g);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<(u32, usize)> = colour.iter().copied().zip(0..n).collect();
    order.sort_unstable();
    for (c, v) in order {
        match cells.last_mut() {
            Some(cell) if colour[cell[0]] == c => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut placed = Vec::with_capacity(n);
    let total = crate::graph::pair_count(n);
    search(g, &mut cells, 0, &mut placed, 0, total, &mut best);
    best
}

/// Depth-first over orderings consistent with the cells; prunes on prefix code.
fn search(
    g: &Graph,
    cells: &mut [Vec<usize>],
    cell: usize,
    placed: &mut Vec<usize>,
    code: u64,
    total: usize,
    best: &mut u64,
) {
    if cell == cells.len() {
        if code < *best {
            *best = code;
        }
        return;
    }
    if cells[cell].is_empty() {
        search(g, cells, cell + 1, placed, code, total, best);
        return;
    }
    let pos = placed.len();
    for i in 0..cells[cell].len() {
        let v = cells[cell].swap_remove(i);
        let mut c = code;
        for (j, &u) in placed.iter().enumerate() {
            if g.has_edge(u, v) {
                c |= 1 << (total - 1 - pair_bit(j, pos));
            }
        }
        // Later vertices only add less significant bits.
        let shift = total - crate::graph::pair_count(pos + 1);
        if prefix(c, shift) <= prefix(*best, shift) {
            placed.push(v);
            let exhausted = cells[cell].is_empty();
            search(g, cells, if exhausted { cell + 1 } else { cell }, placed, c, total, best);
            placed.pop();
        }
        cells[cell].push(v);
        let last = cells[cell].len() - 1;
        cells[cell].swap(i, last);
    }
}

fn prefix(code: u64, shift: usize) -> u64 {
    if shift >= 64 {
        0
    } else {
        code >> shift
    }
}

/// Dense map from labelled codes on `k <= 6` vertices to class indices,
/// shared across the process.
pub struct ClassTable {
    pub order: usize,
    pub class_of_code: Vec<u32>,
    pub keys: Vec<CanonicalKey>,
}

pub const DENSE_CLASS_ORDER: usize = 6;

pub fn class_table(k: usize) -> Option<&'static ClassTable> {
    static TABLES: [OnceLock<ClassTable>; DENSE_CLASS_ORDER + 1] =
        [const { OnceLock::new() }; DENSE_CLASS_ORDER + 1];
    if k > DENSE_CLASS_ORDER {
        return None;
    }
    Some(TABLES[k].get_or_init(|| build_table(k)))
}

fn build_table(k: usize) -> ClassTable {
    use rayon::prelude::*;
    let codes = 1u64 << crate::graph::pair_count(k);
    let keys_per_code: Vec<CanonicalKey> = (0..codes)
        .into_par_iter()
        .map(|c| canonical_key_of_code(k, c))
        .collect();
    let mut index: HashMap<CanonicalKey, u32> = HashMap::new();
    let mut keys = Vec::new();
    let mut class_of_code = Vec::with_capacity(codes as usize);
    for key in keys_per_code {
        let id = *index.entry(key).or_insert_with(|| {
            keys.push(key);
            (keys.len() - 1) as u32
        });
        class_of_code.push(id);
    }
    ClassTable { order: k, class_of_code, keys }
}
