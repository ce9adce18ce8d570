//! Certified maximisers of the induced K_{s,t} density.

use symstab::opt::kst_maximiser;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (s, t) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 5), (3, 3)] {
        let sol = kst_maximiser(s, t)?;
        println!(
            "K_{{{s},{t}}}: alpha = {}, M in [{}, {}]",
            sol.alpha,
            symstab::rational::to_f64(&sol.m_lower),
            symstab::rational::to_f64(&sol.m_upper)
        );
    }
    Ok(())
}
