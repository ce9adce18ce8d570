mod common;

use num_traits::Signed;
use proptest::prelude::*;
use symstab::graph::brute::brute_lambda_max;
use symstab::graph::canon::canonical_key;
use symstab::graph::count::{big_lambda, big_lambda_vertex, induced_count, lambda_graph};
use symstab::graph::edit::edit_distance_exact;
use symstab::graph::shape::complete_partite_shape_of;
use symstab::graph::{pair_count, Graph};
use symstab::rational::{int, Rational};

use common::{choose, kp};

fn graph(min: usize, max: usize) -> impl Strategy<Value = Graph> {
    (min..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), pair_count(n)).prop_map(move |bits| {
            let code = bits.iter().enumerate().fold(0u64, |c, (i, &b)| c | (u64::from(b) << i));
            Graph::from_code(n, code)
        })
    })
}

fn spec_sizes() -> impl Strategy<Value = Vec<usize>> {
    prop_oneof![Just(vec![2, 1]), Just(vec![2, 2]), Just(vec![3, 1]), Just(vec![2, 1, 1]), Just(vec![1, 1, 1])]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vertex_decomposition(g in graph(4, 9), sizes in spec_sizes(), v in 0usize..9) {
        prop_assume!(g.order() > sizes.iter().sum::<usize>());
        let spec = kp(&sizes);
        let v = v % g.order();
        let total = big_lambda(&spec, &g).unwrap();
        let without = big_lambda(&spec, &g.remove_vertex(v).unwrap()).unwrap();
        prop_assert_eq!(total, without + big_lambda_vertex(&spec, &g, v).unwrap());
    }

    #[test]
    fn flips_are_lipschitz(g in graph(4, 9), sizes in spec_sizes(), a in 0usize..9, b in 0usize..9) {
        let n = g.order();
        let k = sizes.iter().sum::<usize>();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b && n >= k);
        let spec = kp(&sizes);
        let before = lambda_graph(&spec, &g).unwrap();
        let after = lambda_graph(&spec, &g.flip(a, b).unwrap()).unwrap();
        let bound = int(2) * choose(k, 2) * spec.gamma_max() / choose(n, 2);
        prop_assert!((before - after).abs() <= bound);
    }

    #[test]
    fn complements_preserve_counts(f in graph(1, 5), g in graph(1, 8)) {
        prop_assume!(f.order() <= g.order());
        prop_assert_eq!(induced_count(&f, &g).unwrap(), induced_count(&f.complement(), &g.complement()).unwrap());
    }

    #[test]
    fn edit_distance_is_a_metric(g in graph(5, 6), h in graph(5, 6), j in graph(5, 6)) {
        prop_assume!(g.order() == h.order() && h.order() == j.order());
        let d = |a: &Graph, b: &Graph| edit_distance_exact(a, b).unwrap();
        prop_assert_eq!(d(&g, &h), d(&h, &g));
        prop_assert_eq!(d(&g, &h) == Rational::from_integer(0.into()), canonical_key(&g).unwrap() == canonical_key(&h).unwrap());
        prop_assert!(d(&g, &j) <= d(&g, &h) + d(&h, &j));
    }
}

#[test]
fn edit_distance_is_a_metric_on_four_vertices() {
    let graphs: Vec<Graph> = (0..1u64 << pair_count(4)).map(|c| Graph::from_code(4, c)).collect();
    let keys: Vec<_> = graphs.iter().map(|g| canonical_key(g).unwrap()).collect();
    let d: Vec<Vec<Rational>> =
        graphs.iter().map(|g| graphs.iter().map(|h| edit_distance_exact(g, h).unwrap()).collect()).collect();
    for i in 0..graphs.len() {
        for j in 0..graphs.len() {
            assert_eq!(d[i][j], d[j][i]);
            assert_eq!(d[i][j] == Rational::from_integer(0.into()), keys[i] == keys[j]);
            for k in 0..graphs.len() {
                assert!(d[i][k] <= &d[i][j] + &d[j][k]);
            }
        }
    }
}

#[test]
fn brute_witnesses_include_complete_partite_graphs() {
    for sizes in [vec![2, 1], vec![2, 2], vec![3, 1], vec![2, 1, 1], vec![1, 1, 1], vec![3]] {
        let spec = kp(&sizes);
        for n in sizes.iter().sum::<usize>()..=6 {
            let brute = brute_lambda_max(&spec, n).unwrap();
            assert!(
                brute.witnesses.iter().any(|g| complete_partite_shape_of(g).is_some()),
                "{sizes:?} at n = {n}"
            );
        }
    }
}
