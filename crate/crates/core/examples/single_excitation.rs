//! Cross-check the transfer integrator against the single-excitation
//! amplitude equation of the composed source and memory network.

use phononic::memory::{
    discretize_profile, simulate_transfer, single_excitation_oracle, PhaseProfile, TransferConfig, DEFAULT_SLOPE_CAP,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for ratio in [0.2, 1.0 / 3.0, 1.0] {
        let config = TransferConfig::lossless(ratio);
        let ideal = PhaseProfile::optimal(ratio)?;
        let capped = discretize_profile(&ideal, DEFAULT_SLOPE_CAP, config.horizon)?;
        for (name, p) in [("ideal", ideal), ("capped", capped), ("theta held at 0", PhaseProfile::constant(0.0)?)] {
            let a = simulate_transfer(&config, &p)?.fidelity;
            let b = single_excitation_oracle(&config, &p)?;
            println!("x = {ratio:.3} {name:>15}: simulated {a:.8}, network {b:.8}, diff {:.1e}", (a - b).abs());
        }
    }
    Ok(())
}
