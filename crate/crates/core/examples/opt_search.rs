//! Multistart search for maximisers of several induced densities.

use symstab::graph::shape::CompletePartiteShape;
use symstab::objective::ObjectiveSpec;
use symstab::opt::{continuous_opt, OptConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let targets: [(&[usize], usize); 6] =
        [(&[2, 2], 6), (&[2, 1, 1, 1], 10), (&[3, 1, 1], 6), (&[3, 3], 6), (&[2, 2, 2], 6), (&[4, 1], 6)];
    for (sizes, max_support) in targets {
        let spec = ObjectiveSpec::induced_density(CompletePartiteShape::new(sizes.to_vec())?)?;
        let start = std::time::Instant::now();
        let set = continuous_opt(&spec, &OptConfig { max_support, ..OptConfig::default() })?;
        let best = set.best().ok_or("no candidate")?;
        let exact = best.exact.as_ref().map_or("-".to_string(), |x| x.to_string());
        let value = best.exact_lambda.as_ref().map_or(format!("{:.12}", best.lambda_approx), |l| l.to_string());
        println!(
            "{:<14} best {exact} lambda {value} ({} candidates, {:.2?})",
            spec.describe(),
            set.candidates.len(),
            start.elapsed()
        );
    }
    Ok(())
}
