//! Build the compensated tunable memory from primitive nodes and compare
//! it with the closed-form triplet.

use phononic::slh::{
    cavity_node, compensated_tunable_cavity, concatenate, feedback, master_eq_coeffs, phase_node, series, trivial_node,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (ke, ki) = (2.0 * std::f64::consts::PI * 300e3, 2.0 * std::f64::consts::PI);
    let two = trivial_node(2)?;
    let one = trivial_node(1)?;
    for theta in [0.0f64, 1.0, 2.0, 3.0] {
        // The cavity detuning cancels the frequency pull of the mirror loop.
        let cav = cavity_node(ke, ki, -ke * theta.sin())?;
        let fed = series(&cav, &concatenate(&phase_node(-0.5 * theta), &two))?;
        let looped = series(&concatenate(&phase_node(theta), &two), &fed)?;
        let out = concatenate(&concatenate(&one, &phase_node(-0.5 * theta)), &one);
        let net = feedback(&series(&out, &looped)?, 0, 1)?;
        let reference = compensated_tunable_cavity(ke, ki, theta)?;
        let dl = (&net.l - &reference.l).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let drift = master_eq_coeffs(&net).drift[(0, 0)];
        println!(
            "theta = {theta:.1}: |L - L_ref| = {dl:.2e}, decay = {:>9.1} /s, residual detuning = {:.1e} rad/s",
            -2.0 * drift.re,
            drift.im
        );
    }
    Ok(())
}
