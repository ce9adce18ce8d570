//! Limit edit distance between partite vectors.
//!
//! Overlaying realisations of x and y with a transport plan X (rows: parts of x
//! then the clique, columns: parts of y then the clique), the disagreeing pairs
//! have density Σ x_i² + Σ y_j² − 2 Σ_{i,j ≥ 1} X_ij². The objective is convex in
//! X, so the best plan is a vertex of the transport polytope.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::PartiteVector;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const EDIT_SUPPORT_LIMIT: usize = 8;
const NODE_BUDGET: usize = 2_000_000;

pub fn edit_distance_vectors(x: &PartiteVector, y: &PartiteVector) -> Result<Rational> {
    for v in [x, y] {
        if v.support_star().len() > EDIT_SUPPORT_LIMIT {
            return Err(Error::BoundExceeded(format!("support of {v} exceeds {EDIT_SUPPORT_LIMIT}")));
        }
    }
    let rows = lines(x);
    let cols = lines(y);
    let mut search = Search { memo: HashMap::new(), nodes: 0 };
    let best = search.best(&rows, &cols)?;
    Ok(x.norm2_squared() + y.norm2_squared() - best * Rational::from_integer(2.into()))
}

#[derive(Clone, Debug, Hash, PartialEq, Eq)]
struct Line {
    mass: Rational,
    rewarded: bool,
}

fn lines(x: &PartiteVector) -> Vec<Line> {
    let mut v: Vec<Line> = x.parts().iter().map(|p| Line { mass: p.clone(), rewarded: true }).collect();
    if x.x0().is_positive() {
        v.push(Line { mass: x.x0().clone(), rewarded: false });
    }
    v
}

struct Search {
    memo: HashMap<(Vec<Line>, Vec<Line>), Rational>,
    nodes: usize,
}

impl Search {
    /// Largest Σ X_ij² over rewarded cells among vertices of the remaining polytope.
    fn best(&mut self, rows: &[Line], cols: &[Line]) -> Result<Rational> {
        if rows.is_empty() || cols.is_empty() {
            return Ok(Rational::zero());
        }
        let key = (rows.to_vec(), cols.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(Error::Budget("transport vertex enumeration".into()));
        }
        let mut best: Option<Rational> = None;
        for i in 0..rows.len() {
            for j in 0..cols.len() {
                let r = &rows[i].mass;
                let c = &cols[j].mass;
                let t = r.min(c).clone();
                let gain = if rows[i].rewarded && cols[j].rewarded { &t * &t } else { Rational::zero() };
                let mut nr = rows.to_vec();
                let mut nc = cols.to_vec();
                nr[i].mass -= &t;
                nc[j].mass -= &t;
                nr.retain(|l| l.mass.is_positive());
                nc.retain(|l| l.mass.is_positive());
                let value = gain + self.best(&nr, &nc)?;
                if best.as_ref().is_none_or(|b| value > *b) {
                    best = Some(value);
                }
            }
        }
        let best = best.unwrap_or_else(Rational::zero);
        self.memo.insert(key, best.clone());
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn known_distances() {
        let half = PartiteVector::uniform(2);
        assert_eq!(edit_distance_vectors(&half, &PartiteVector::zero()).unwrap(), rat(1, 2));
        assert_eq!(edit_distance_vectors(&half, &half).unwrap(), rat(0, 1));
        assert_eq!(edit_distance_vectors(&PartiteVector::uniform(1), &half).unwrap(), rat(1, 2));
        let x = PartiteVector::new(vec![rat(3, 5)]).unwrap();
        assert_eq!(edit_distance_vectors(&x, &x).unwrap(), rat(0, 1));
    }
}
