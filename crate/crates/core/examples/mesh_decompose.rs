//! Decompose a random unitary into a triangular interferometer mesh and
//! replay it.

use phononic::circuits::{haar_unitary, max_deviation, reck_decompose};
use rand::SeedableRng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(6);
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let u = haar_unitary(n, &mut rng);
    let plan = reck_decompose(&u)?;
    println!("{} elements for N = {n}", plan.elements.len());
    for (k, e) in plan.elements.iter().enumerate() {
        println!("  {k:>2}: ports {}-{}  theta = {:+.4}  phi = {:+.4}", e.i, e.i + 1, e.theta, e.phi);
    }
    let screen: Vec<String> = plan.screen.iter().map(|p| format!("{p:+.3}")).collect();
    println!("screen [{}]", screen.join(", "));
    println!("max |U_mesh - U| = {:.2e}", max_deviation(&plan.to_matrix()?, &u));
    Ok(())
}
