//! Exact limit densities, their finite realisations, and edit distances.

use symstab::graph::brute::brute_lambda_max;
use symstab::graph::count::lambda_graph;
use symstab::graph::shape::CompletePartiteShape;
use symstab::objective::ObjectiveSpec;
use symstab::opt::finite_opt;
use symstab::partite::edit::edit_distance_vectors;
use symstab::partite::engine::lambda_of_vector;
use symstab::partite::realise::realisation_graph;
use symstab::partite::PartiteVector;
use symstab::rational::rat;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ObjectiveSpec::induced_density(CompletePartiteShape::new(vec![2, 2])?)?;
    let x = PartiteVector::uniform(2);
    println!("{}: lambda({x}) = {}", spec.describe(), lambda_of_vector(&spec, &x)?);
    for n in [8, 16, 32, 48] {
        let (g, _) = realisation_graph(n, &x)?;
        println!("  n = {n:>2}: lambda(G_n,x) = {}", lambda_graph(&spec, &g)?);
    }

    let path = ObjectiveSpec::induced_density(CompletePartiteShape::new(vec![2, 1])?)?;
    for n in 5..=7 {
        let brute = brute_lambda_max(&path, n)?;
        let partite = finite_opt(&path, n)?;
        println!("{}: n = {n} brute force {} complete partite {}", path.describe(), brute.value, partite.lambda);
    }

    let y = PartiteVector::new(vec![rat(2, 3), rat(1, 3)])?;
    let z = PartiteVector::new(vec![rat(1, 2)])?;
    println!("delta({x}, {y}) = {}", edit_distance_vectors(&x, &y)?);
    println!("delta({y}, {z}) = {}", edit_distance_vectors(&y, &z)?);
    Ok(())
}
