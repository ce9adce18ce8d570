//! Zykov symmetrisation of a random graph and single-vertex repair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symstab::graph::shape::CompletePartiteShape;
use symstab::graph::{pair_count, Graph};
use symstab::objective::ObjectiveSpec;
use symstab::symmetrise::{symmetrise_full, symmetrise_vertex};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ObjectiveSpec::induced_density(CompletePartiteShape::new(vec![2, 2])?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 10;
    let g = Graph::from_code(n, rng.gen::<u64>() & ((1u64 << pair_count(n)) - 1));
    let trace = symmetrise_full(&spec, &g)?;
    for step in &trace.steps {
        println!("clone {} -> {}: {} -> {} ({} pairs)", step.source, step.target, step.lambda_before, step.lambda_after, step.pairs_edited);
    }
    let shape = trace.final_shape.as_ref().map_or("-".to_string(), |s| format!("{:?}", s.sizes()));
    println!("{} steps, final lambda {}, parts {shape}", trace.steps.len(), trace.final_lambda);

    let base = trace.final_graph;
    let h = base.add_vertex(0b0101)?;
    let repair = symmetrise_vertex(&spec, &h, base.order())?;
    println!("new vertex: {} single edits, {} -> {}", repair.steps.len(), repair.initial_lambda, repair.final_lambda);
    Ok(())
}
