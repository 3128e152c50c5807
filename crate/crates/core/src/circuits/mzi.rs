use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Matrix2;

use crate::C64;

/// Two-mode element with internal phase `theta` and external phase `phi`.
pub fn mzi_unitary(theta: f64, phi: f64) -> Matrix2<C64> {
    let (s, c) = (0.5 * theta).sin_cos();
    let ep = C64::from_polar(1.0, 0.5 * phi);
    let em = ep.conj();
    let i = C64::i();
    Matrix2::new(i * ep * s, i * ep * c, i * em * c, -i * em * s)
}

/// 50:50 splitter `b_{1,2} = (a_{1,2} + i a_{2,1}) / sqrt 2`.
pub fn beam_splitter() -> Matrix2<C64> {
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    let t = C64::new(0.0, FRAC_1_SQRT_2);
    Matrix2::new(r, t, t, r)
}

/// Differential phase pair `diag(e^{i x/2}, e^{-i x/2})`.
pub fn phase_pair(x: f64) -> Matrix2<C64> {
    let e = C64::from_polar(1.0, 0.5 * x);
    Matrix2::new(e, C64::new(0.0, 0.0), C64::new(0.0, 0.0), e.conj())
}

/// Splitter, internal phase pair, combiner, external phase pair.
///
/// In this convention the product equals [`mzi_unitary`] exactly.
pub fn mzi_from_primitives(theta: f64, phi: f64) -> Matrix2<C64> {
    let b = beam_splitter();
    phase_pair(phi) * b * phase_pair(theta) * b
}

/// Port powers for a unit input on the first port of an interferometer
/// biased at quadrature, `((1 + sin theta) / 2, (1 - sin theta) / 2)`.
pub fn interferometer_output_powers(theta: f64) -> (f64, f64) {
    let u = mzi_from_primitives(theta + std::f64::consts::FRAC_PI_2, 0.0);
    (u[(0, 0)].norm_sqr(), u[(1, 0)].norm_sqr())
}
