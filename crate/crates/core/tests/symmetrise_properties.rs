mod common;

use proptest::prelude::*;
use symstab::graph::brute::brute_lambda_max;
use symstab::graph::count::lambda_graph;
use symstab::graph::shape::complete_partite_shape_of;
use symstab::graph::{pair_count, Graph};
use symstab::objective::ObjectiveSpec;
use symstab::opt::finite_opt;
use symstab::symmetrise::{symmetrise_full, symmetrise_vertex, SymmetrisationTrace};

use common::kp;

/// Σ over twin classes (equal neighbourhoods) of the squared class size.
fn twin_square_sum(g: &Graph) -> usize {
    let mut sizes = std::collections::HashMap::new();
    for v in 0..g.order() {
        *sizes.entry(g.neighbours(v)).or_insert(0usize) += 1;
    }
    sizes.values().map(|s| s * s).sum()
}

fn check_trace(spec: &ObjectiveSpec, g: &Graph, trace: &SymmetrisationTrace) {
    let n = g.order();
    assert!(trace.is_monotone());
    assert!(trace.steps.len() <= n * (n - 1) / 2, "{} steps on {n} vertices", trace.steps.len());
    assert!(complete_partite_shape_of(&trace.final_graph).is_some());
    let mut current = g.clone();
    let mut lambda = trace.initial_lambda.clone();
    for step in &trace.steps {
        let next = current.clone_vertex(step.source, step.target).unwrap();
        let value = lambda_graph(spec, &next).unwrap();
        assert_eq!(step.lambda_before, lambda);
        assert_eq!(step.lambda_after, value);
        assert!(value >= lambda);
        assert!(step.pairs_edited < n);
        if value == lambda {
            assert!(twin_square_sum(&next) > twin_square_sum(&current));
        }
        current = next;
        lambda = value;
    }
    assert_eq!(current, trace.final_graph);
}

fn graph(min: usize, max: usize) -> impl Strategy<Value = Graph> {
    (min..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), pair_count(n)).prop_map(move |bits| {
            let code = bits.iter().enumerate().fold(0u64, |c, (i, &b)| c | (u64::from(b) << i));
            Graph::from_code(n, code)
        })
    })
}

#[test]
fn every_graph_on_five_vertices_symmetrises() {
    for sizes in [vec![2, 2], vec![2, 1], vec![3, 1], vec![2, 1, 1]] {
        let spec = kp(&sizes);
        for code in 0..1u64 << pair_count(5) {
            let g = Graph::from_code(5, code);
            check_trace(&spec, &g, &symmetrise_full(&spec, &g).unwrap());
        }
    }
}

#[test]
fn brute_force_witnesses_stay_optimal() {
    for sizes in [vec![2, 1], vec![2, 2], vec![3, 1]] {
        let spec = kp(&sizes);
        for n in 5..=7 {
            let brute = brute_lambda_max(&spec, n).unwrap();
            let partite = finite_opt(&spec, n).unwrap();
            for g in &brute.witnesses {
                let trace = symmetrise_full(&spec, g).unwrap();
                assert_eq!(trace.final_lambda, brute.value);
                assert_eq!(trace.final_lambda, partite.lambda);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_graphs_symmetrise(g in graph(4, 10)) {
        let spec = kp(&[2, 2]);
        check_trace(&spec, &g, &symmetrise_full(&spec, &g).unwrap());
    }

    #[test]
    fn single_vertex_steps_edit_one_pair(g in graph(4, 9), links in proptest::collection::vec(any::<bool>(), 9)) {
        let spec = kp(&[2, 2]);
        let base = symmetrise_full(&spec, &g).unwrap().final_graph;
        let n = base.order();
        let mask = links.iter().take(n).enumerate().fold(0u64, |m, (i, &b)| m | (u64::from(b) << i));
        let h = base.add_vertex(mask).unwrap();
        let trace = symmetrise_vertex(&spec, &h, n).unwrap();
        prop_assert!(trace.is_monotone());
        prop_assert!(trace.steps.iter().all(|s| s.pairs_edited == 1 && s.lambda_before <= s.lambda_after));
        prop_assert!(trace.steps.len() <= n);
    }
}
