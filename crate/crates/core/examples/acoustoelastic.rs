//! Strain energy and strained stiffness of silicon under a uniaxial load
//! along `[110]`, expressed in both crystal frames.

use std::f64::consts::FRAC_PI_4;

use phononic::tensor::{
    bond_rotate, phonoelastic_tensor, strain_energy, strain_frame_110_to_100, CubicModuli, EnergyOrder, FrameStrain,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let si = CubicModuli::silicon();
    println!("{:>10} {:>12} {:>12} {:>10} {:>10}", "strain", "W2 (J/m3)", "W3 (J/m3)", "C'11 GPa", "C'66 GPa");
    for k in -4..=4 {
        let e = 1e-3 * k as f64;
        let s = strain_frame_110_to_100(&FrameStrain { xx: e, ..Default::default() });
        let w2 = strain_energy(&s, &si, EnergyOrder::Second);
        let w3 = strain_energy(&s, &si, EnergyOrder::Third);
        let c = bond_rotate(&phonoelastic_tensor(&s, &si), FRAC_PI_4);
        println!("{e:>10.4} {w2:>12.1} {w3:>12.1} {:>10.2} {:>10.2}", c.get(0, 0) / 1e9, c.get(5, 5) / 1e9);
    }
    Ok(())
}
