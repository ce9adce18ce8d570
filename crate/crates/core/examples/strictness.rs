//! Strictness constants for known maximisers and a failing sum objective.

use symstab::graph::shape::CompletePartiteShape;
use symstab::objective::ObjectiveSpec;
use symstab::partite::PartiteVector;
use symstab::rational::rat;
use symstab::strictness::{finite_strictness_check, strictness_certificate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kp = |sizes: &[usize]| ObjectiveSpec::induced_density(CompletePartiteShape::new(sizes.to_vec())?);
    let cases = [
        (kp(&[2, 2])?, PartiteVector::uniform(2)),
        (kp(&[2, 1, 1, 1])?, PartiteVector::uniform(8)),
        (kp(&[3, 1, 1])?, PartiteVector::new(vec![rat(3, 5)])?),
        ("SUM 1*KP 3 + 1*KP 2,1 + 1*KP 1,1,1".parse::<ObjectiveSpec>()?, PartiteVector::uniform(2)),
    ];
    for (spec, x) in &cases {
        let report = strictness_certificate(spec, std::slice::from_ref(x))?;
        let c2 = report.c2.as_ref().map_or("-".to_string(), |c| c.to_string());
        println!("{} at {x}: c1 {} c2 {c2} c {} pass {}", spec.describe(), report.c1, report.c, report.pass);
    }
    let finite = finite_strictness_check(&cases[0].0, &cases[0].1, 8)?;
    println!("C4 at n = 8: c {} pass {}", finite.c, finite.pass);
    Ok(())
}
