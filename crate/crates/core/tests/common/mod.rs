#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symstab::graph::shape::CompletePartiteShape;
use symstab::graph::Graph;
use symstab::objective::ObjectiveSpec;
use symstab::partite::PartiteVector;
use symstab::rational::{binomial, from_biguint, rat, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn kp(sizes: &[usize]) -> ObjectiveSpec {
    ObjectiveSpec::induced_density(CompletePartiteShape::new(sizes.to_vec()).unwrap()).unwrap()
}

/// Random vector with common denominator at most `max_den` and at most `max_support` parts.
pub fn random_vector(rng: &mut impl Rng, max_den: i64, max_support: usize) -> PartiteVector {
    let d = rng.gen_range(1..=max_den);
    let m = rng.gen_range(1..=max_support);
    let mut left = d;
    let mut parts = Vec::new();
    for _ in 0..m {
        if left == 0 {
            break;
        }
        let p = rng.gen_range(0..=left);
        left -= p;
        parts.push(rat(p, d));
    }
    PartiteVector::from_unsorted(parts).unwrap()
}

/// Random G(n, 1/2) graph.
pub fn random_graph(rng: &mut impl Rng, n: usize) -> Graph {
    let mut g = Graph::empty(n).unwrap();
    for v in 1..n {
        for u in 0..v {
            if rng.gen_bool(0.5) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// Random objective: a single complete partite density or a signed combination.
pub fn random_spec(rng: &mut impl Rng) -> ObjectiveSpec {
    let shapes: [&str; 9] = ["2", "1,1", "2,1", "3", "2,2", "3,1", "2,1,1", "3,1,1", "2,1,1,1"];
    if rng.gen_bool(0.5) {
        return format!("KP {}", shapes[rng.gen_range(0..shapes.len())]).parse().unwrap();
    }
    let terms: Vec<String> = (0..rng.gen_range(2..=3))
        .map(|_| format!("{}*KP {}", rng.gen_range(-3..=3i64), shapes[rng.gen_range(0..shapes.len())]))
        .collect();
    format!("SUM {}", terms.join(" + ")).parse().unwrap()
}

/// (tr)! / (t!^r r^{tr}).
pub fn krt_value(r: usize, t: usize) -> Rational {
    let fact = |n: usize| from_biguint((1..=n as u64).map(num_bigint::BigUint::from).product());
    fact(t * r) / (fact(t).pow(r as i32) * Rational::from_integer((r as i64).pow((t * r) as u32).into()))
}

pub fn choose(n: usize, k: usize) -> Rational {
    from_biguint(binomial(n as u64, k as u64))
}
