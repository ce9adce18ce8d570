//! Flip gradients, attachment polynomials and the Lagrange residual at a maximiser.

use symstab::graph::shape::CompletePartiteShape;
use symstab::objective::ObjectiveSpec;
use symstab::partite::PartiteVector;
use symstab::perturbation::{attach_polynomial, lagrange_residual, partial_derivative};
use symstab::strictness::flip_table;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = ObjectiveSpec::induced_density(CompletePartiteShape::new(vec![2, 1, 1, 1])?)?;
    let x = PartiteVector::uniform(8);
    println!("{} at {x}", spec.describe());
    println!("lagrange residual {}", lagrange_residual(&spec, &x)?);
    println!("d/dx_1 = {}", partial_derivative(&spec, &x, 1)?);
    for pair in flip_table(&spec, &x)?.iter().filter(|p| p.i1 <= 2 && p.i2 <= 2) {
        println!("flip ({}, {}): {}", pair.i1, pair.i2, pair.value);
    }
    for joined in [7, 6, 3] {
        let b: Vec<bool> = (0..8).map(|i| i < joined).collect();
        println!("joined to {joined} parts: {}", attach_polynomial(&spec, &x, &b)?);
    }
    Ok(())
}
