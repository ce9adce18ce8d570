//! Objectives λ(G) = average of γ(G[X]) over k-subsets X.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::canon::{canonical_key, canonical_key_of_code, class_table, CanonicalKey, DENSE_CLASS_ORDER, MAX_CANONICAL_ORDER};
use crate::graph::shape::{complete_partite_shape_of, CompletePartiteShape};
use crate::graph::{pair_count, Graph, Subsets};
use crate::partitions::partitions;
use crate::rational::{binomial, fmt_rational, from_biguint, lcm_of_denominators, parse_rational, Rational};

/// One summand `coeff * p(K_shape, .)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteTerm {
    pub shape: CompletePartiteShape,
    pub coeff: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Table,
    Combination(Vec<PartiteTerm>),
}

/// γ on isomorphism classes of k-vertex graphs, with λ-friendly lookups.
#[derive(Clone)]
pub struct ObjectiveSpec {
    k: usize,
    gamma: BTreeMap<CanonicalKey, Rational>,
    gamma_max: Rational,
    provenance: Provenance,
    lookup: Lookup,
    dense: Option<DenseGamma>,
}

#[derive(Clone)]
enum Lookup {
    /// All terms have order k: γ depends only on the complete partite shape.
    ByShape(HashMap<Vec<usize>, Rational>),
    ByKey,
}

/// γ indexed by labelled code, with an integer scaling for fast sums.
#[derive(Clone)]
pub struct DenseGamma {
    pub values: Vec<Rational>,
    pub scale: BigInt,
    pub scaled: Option<Vec<i128>>,
}

impl ObjectiveSpec {
    /// p(K_shape, .).
    pub fn induced_density(shape: CompletePartiteShape) -> Result<Self> {
        Self::combination(vec![PartiteTerm { shape, coeff: Rational::one() }])
    }

    /// Sum of p(F, .) over every complete partite F on k vertices.
    pub fn complete_partite_sum(k: usize) -> Result<Self> {
        let terms = partitions(k)
            .into_iter()
            .map(|p| Ok(PartiteTerm { shape: CompletePartiteShape::new(p)?, coeff: Rational::one() }))
            .collect::<Result<Vec<_>>>()?;
        Self::combination(terms)
    }

    /// Σ c_F p(F, .). The arity is the largest order among the terms.
    pub fn combination(terms: Vec<PartiteTerm>) -> Result<Self> {
        let k = terms.iter().map(|t| t.shape.order()).max().unwrap_or(0);
        if terms.is_empty() || k < 1 {
            return Err(Error::InvalidObjective("empty combination".into()));
        }
        if k > MAX_CANONICAL_ORDER {
            return Err(Error::InvalidObjective(format!("order {k} exceeds {MAX_CANONICAL_ORDER}")));
        }
        let mixed = terms.iter().any(|t| t.shape.order() != k);
        if mixed && k > DENSE_CLASS_ORDER {
            return Err(Error::InvalidObjective(format!(
                "mixed-order combinations need k <= {DENSE_CLASS_ORDER}"
            )));
        }
        let mut gamma = BTreeMap::new();
        let lookup = if mixed {
            let table = class_table(k).expect("k within dense range");
            let graphs: Vec<(Graph, Rational)> = terms
                .iter()
                .map(|t| Ok((t.shape.graph()?, t.coeff.clone())))
                .collect::<Result<_>>()?;
            for key in &table.keys {
                let h = key.graph();
                let mut value = Rational::zero();
                for (f, c) in &graphs {
                    let count = crate::graph::count::induced_count(f, &h)?;
                    let subsets = binomial(k as u64, f.order() as u64);
                    value += c * Rational::new(count.into(), from_biguint(subsets).to_integer());
                }
                if !value.is_zero() {
                    gamma.insert(*key, value);
                }
            }
            Lookup::ByKey
        } else {
            let mut by_shape: HashMap<Vec<usize>, Rational> = HashMap::new();
            for t in &terms {
                *by_shape.entry(t.shape.sizes().to_vec()).or_insert_with(Rational::zero) += &t.coeff;
            }
            by_shape.retain(|_, v| !v.is_zero());
            for (sizes, v) in &by_shape {
                let key = canonical_key(&Graph::complete_partite(sizes)?)?;
                gamma.insert(key, v.clone());
            }
            Lookup::ByShape(by_shape)
        };
        Self::assemble(k, gamma, Provenance::Combination(terms), lookup)
    }

    /// Raw table; classes not listed get γ = 0.
    pub fn from_table(k: usize, entries: impl IntoIterator<Item = (Graph, Rational)>) -> Result<Self> {
        if k > MAX_CANONICAL_ORDER {
            return Err(Error::InvalidObjective(format!("order {k} exceeds {MAX_CANONICAL_ORDER}")));
        }
        let mut gamma = BTreeMap::new();
        for (g, v) in entries {
            if g.order() != k {
                return Err(Error::OrderMismatch(g.order(), k));
            }
            let key = canonical_key(&g)?;
            if gamma.contains_key(&key) {
                return Err(Error::InvalidObjective(format!("class {key} listed twice")));
            }
            if !v.is_zero() {
                gamma.insert(key, v);
            }
        }
        Self::assemble(k, gamma, Provenance::Table, Lookup::ByKey)
    }

    /// Table built from a function on representatives (k <= 6).
    pub fn from_fn(k: usize, f: impl Fn(&Graph) -> Rational) -> Result<Self> {
        let table = class_table(k)
            .ok_or_else(|| Error::InvalidObjective(format!("from_fn needs k <= {DENSE_CLASS_ORDER}")))?;
        let entries: Vec<(Graph, Rational)> = table.keys.iter().map(|key| {
            let g = key.graph();
            let v = f(&g);
            (g, v)
        }).collect();
        Self::from_table(k, entries)
    }

    fn assemble(
        k: usize,
        gamma: BTreeMap<CanonicalKey, Rational>,
        provenance: Provenance,
        lookup: Lookup,
    ) -> Result<Self> {
        let gamma_max = gamma.values().map(|v| v.abs()).max().unwrap_or_else(Rational::zero);
        let mut spec = ObjectiveSpec { k, gamma, gamma_max, provenance, lookup, dense: None };
        if k <= DENSE_CLASS_ORDER {
            spec.dense = Some(spec.build_dense());
        }
        Ok(spec)
    }

    fn build_dense(&self) -> DenseGamma {
        let table = class_table(self.k).expect("dense order");
        let per_class: Vec<Rational> = table
            .keys
            .iter()
            .map(|key| self.gamma.get(key).cloned().unwrap_or_else(Rational::zero))
            .collect();
        let values: Vec<Rational> = table.class_of_code.iter().map(|&c| per_class[c as usize].clone()).collect();
        let scale = lcm_of_denominators(per_class.iter());
        let scaled_class: Option<Vec<i128>> = per_class
            .iter()
            .map(|v| (v * Rational::from_integer(scale.clone())).to_integer().to_i128())
            .map(|x| x.filter(|x| x.unsigned_abs() < 1u128 << 90))
            .collect();
        let scaled = scaled_class.map(|sc| table.class_of_code.iter().map(|&c| sc[c as usize]).collect());
        DenseGamma { values, scale, scaled }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gamma_max(&self) -> &Rational {
        &self.gamma_max
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Nonzero entries of γ keyed by class.
    pub fn gamma_entries(&self) -> &BTreeMap<CanonicalKey, Rational> {
        &self.gamma
    }

    pub fn dense(&self) -> Option<&DenseGamma> {
        self.dense.as_ref()
    }

    /// γ of a labelled k-vertex graph given by its code.
    pub fn gamma_of_code(&self, code: u64) -> Rational {
        if let Some(d) = &self.dense {
            return d.values[code as usize].clone();
        }
        match &self.lookup {
            Lookup::ByShape(map) => {
                let g = Graph::from_code(self.k, code);
                complete_partite_shape_of(&g)
                    .and_then(|s| map.get(s.sizes()).cloned())
                    .unwrap_or_else(Rational::zero)
            }
            Lookup::ByKey => {
                let key = canonical_key_of_code(self.k, code);
                self.gamma.get(&key).cloned().unwrap_or_else(Rational::zero)
            }
        }
    }

    pub fn gamma(&self, g: &Graph) -> Result<Rational> {
        if g.order() != self.k {
            return Err(Error::OrderMismatch(g.order(), self.k));
        }
        Ok(self.gamma_of_code(g.code()))
    }

    /// Σ c_F p(F, .) with c_F >= 0 whenever F is not a clique: symmetrisation never decreases λ.
    pub fn is_symmetrisable_form(&self) -> bool {
        match &self.provenance {
            Provenance::Table => false,
            Provenance::Combination(terms) => terms
                .iter()
                .all(|t| t.shape.independent_parts().is_empty() || !t.coeff.is_negative()),
        }
    }

    /// If every term has order k, the coefficient on each complete partite shape.
    pub fn shape_coefficients(&self) -> Option<&HashMap<Vec<usize>, Rational>> {
        match &self.lookup {
            Lookup::ByShape(m) => Some(m),
            Lookup::ByKey => None,
        }
    }

    /// γ on every complete partite shape of order k (zero entries omitted).
    pub fn partite_gamma(&self) -> Vec<(CompletePartiteShape, Rational)> {
        partitions(self.k)
            .into_iter()
            .filter_map(|p| {
                let shape = CompletePartiteShape::new(p).ok()?;
                let g = shape.graph().ok()?;
                let v = self.gamma_of_code(g.code());
                (!v.is_zero()).then_some((shape, v))
            })
            .collect()
    }

    /// Parse a γ table from JSON: `{"k":3,"gamma":[{"edges":[[0,1]],"value":"1/2"}]}`.
    pub fn from_table_json(text: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)?;
        let entries = file
            .gamma
            .into_iter()
            .map(|e| {
                let g = Graph::from_edges(file.k, &e.edges.iter().map(|p| (p[0], p[1])).collect::<Vec<_>>())?;
                Ok((g, parse_rational(&e.value)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(file.k, entries)
    }

    /// Human-readable description.
    pub fn describe(&self) -> String {
        match &self.provenance {
            Provenance::Table => format!("TABLE k={} ({} nonzero classes)", self.k, self.gamma.len()),
            Provenance::Combination(terms) if terms.len() == 1 && terms[0].coeff.is_one() => {
                format!("KP {}", join_sizes(terms[0].shape.sizes()))
            }
            Provenance::Combination(terms) => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|t| format!("{}*KP {}", fmt_rational(&t.coeff), join_sizes(t.shape.sizes())))
                    .collect();
                format!("SUM {}", parts.join(" + "))
            }
        }
    }
}

impl fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ObjectiveSpec({})", self.describe())
    }
}

fn join_sizes(sizes: &[usize]) -> String {
    sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Deserialize, Serialize)]
struct TableFile {
    k: usize,
    gamma: Vec<TableEntry>,
}

#[derive(Deserialize, Serialize)]
struct TableEntry {
    edges: Vec<[usize; 2]>,
    value: String,
}

fn parse_shape(text: &str) -> Result<CompletePartiteShape> {
    let rest = text
        .trim()
        .strip_prefix("KP")
        .ok_or_else(|| Error::InvalidObjective(format!("expected `KP a,b,...`, got `{}`", text.trim())))?;
    let sizes = rest
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidObjective(format!("bad part size `{}`", s.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    CompletePartiteShape::new(sizes)
}

impl FromStr for ObjectiveSpec {
    type Err = Error;

    /// `KP 2,1,1,1` or `SUM 1*KP 3 + -1*KP 1,1,1`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("SUM") {
            let terms = rest
                .split('+')
                .map(|term| {
                    let term = term.trim();
                    let (coeff, shape) = match term.split_once('*') {
                        Some((c, s)) => (parse_rational(c.trim())?, s),
                        None => (Rational::one(), term),
                    };
                    Ok(PartiteTerm { shape: parse_shape(shape)?, coeff })
                })
                .collect::<Result<Vec<_>>>()?;
            ObjectiveSpec::combination(terms)
        } else if text.starts_with("KP") {
            ObjectiveSpec::induced_density(parse_shape(text)?)
        } else {
            Err(Error::InvalidObjective(format!("unrecognised objective `{text}`")))
        }
    }
}

/// Number of labelled codes on k vertices.
pub fn code_count(k: usize) -> u64 {
    1u64 << pair_count(k)
}

/// Iterator over k-subsets, re-exported for callers that sum γ directly.
pub fn subsets(n: usize, k: usize) -> Subsets {
    Subsets::new(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn parses_objectives() {
        let s: ObjectiveSpec = "KP 2,1,1,1".parse().unwrap();
        assert_eq!(s.k(), 5);
        assert!(s.is_symmetrisable_form());
        assert_eq!(s.gamma(&Graph::complete_partite(&[1, 2, 1, 1]).unwrap()).unwrap(), rat(1, 1));
        assert_eq!(s.gamma(&Graph::complete(5).unwrap()).unwrap(), rat(0, 1));
        let g: ObjectiveSpec = "SUM 1*KP 3 + -1*KP 1,1,1".parse().unwrap();
        assert!(g.is_symmetrisable_form());
        assert_eq!(g.gamma(&Graph::complete(3).unwrap()).unwrap(), rat(-1, 1));
        assert_eq!(*g.gamma_max(), rat(1, 1));
        assert!("KQ 2".parse::<ObjectiveSpec>().is_err());
        assert!("KP 2,x".parse::<ObjectiveSpec>().is_err());
    }

    #[test]
    fn mixed_orders_expand_by_density() {
        // p(K2,.) as a 3-vertex objective: a triangle has edge density 1, a path 2/3.
        let s: ObjectiveSpec = "SUM 1*KP 1,1 + 0*KP 3".parse().unwrap();
        assert_eq!(s.k(), 3);
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(s.gamma(&path).unwrap(), rat(2, 3));
        assert_eq!(s.gamma(&Graph::complete(3).unwrap()).unwrap(), rat(1, 1));
    }

    #[test]
    fn table_round_trip() {
        let json = r#"{"k":3,"gamma":[{"edges":[[0,1]],"value":"1/2"},{"edges":[],"value":"1"}]}"#;
        let s = ObjectiveSpec::from_table_json(json).unwrap();
        let single = Graph::from_edges(3, &[(1, 2)]).unwrap();
        assert_eq!(s.gamma(&single).unwrap(), rat(1, 2));
        assert_eq!(s.gamma(&Graph::complete(3).unwrap()).unwrap(), rat(0, 1));
        assert!(!s.is_symmetrisable_form());
        let dup = r#"{"k":3,"gamma":[{"edges":[[0,1]],"value":"1"},{"edges":[[1,2]],"value":"1"}]}"#;
        assert!(ObjectiveSpec::from_table_json(dup).is_err());
    }

    #[test]
    fn complete_partite_sum_is_one_on_partite_graphs() {
        let s = ObjectiveSpec::complete_partite_sum(3).unwrap();
        assert_eq!(s.partite_gamma().len(), 3);
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(s.gamma(&path).unwrap(), rat(1, 1));
        let single = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(s.gamma(&single).unwrap(), rat(0, 1));
    }
}
