use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::mzi::mzi_unitary;
use crate::error::{Error, Result};
use crate::C64;

/// Largest accepted `max |U^dag U - I|`.
pub const UNITARITY_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-14;

/// One element acting on ports `i` and `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MziSetting {
    pub i: usize,
    pub theta: f64,
    pub phi: f64,
}

/// Phase screen followed by a sequence of two-mode elements, listed in the
/// order light meets them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshPlan {
    pub screen: Vec<f64>,
    pub elements: Vec<MziSetting>,
}

impl MeshPlan {
    /// Plan with a zero screen and no elements.
    pub fn identity(n: usize) -> Self {
        Self { screen: vec![0.0; n], elements: Vec::new() }
    }

    pub fn n_modes(&self) -> usize {
        self.screen.len()
    }

    /// Propagate mode amplitudes through the screen and then every element.
    pub fn apply(&self, input: &[C64]) -> Result<Vec<C64>> {
        let n = self.n_modes();
        if input.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: input.len() });
        }
        let mut x: Vec<C64> = input.iter().zip(&self.screen).map(|(a, p)| a * C64::from_polar(1.0, *p)).collect();
        for e in &self.elements {
            if e.i + 1 >= n {
                return Err(Error::InvalidPort { index: e.i, n_ports: n });
            }
            let u = mzi_unitary(e.theta, e.phi);
            let (a, b) = (x[e.i], x[e.i + 1]);
            x[e.i] = u[(0, 0)] * a + u[(0, 1)] * b;
            x[e.i + 1] = u[(1, 0)] * a + u[(1, 1)] * b;
        }
        Ok(x)
    }

    /// The realized unitary, built column by column.
    pub fn to_matrix(&self) -> Result<DMatrix<C64>> {
        let n = self.n_modes();
        let mut m = DMatrix::zeros(n, n);
        for k in 0..n {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[k] = C64::new(1.0, 0.0);
            m.set_column(k, &DVector::from_vec(self.apply(&e)?));
        }
        Ok(m)
    }
}

/// `max |U^dag U - I|`.
pub fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    max_deviation(&(u.adjoint() * u), &DMatrix::identity(n, n))
}

/// `max |a - b|` elementwise.
pub fn max_deviation(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Triangular decomposition `U = T_1 T_2 ... T_K D` into `N(N-1)/2` adjacent
/// two-mode elements and a diagonal phase screen `D`.
///
/// Sub-diagonal entries are nulled column by column from the bottom row up
/// by left-multiplying with `T^dag`. An entry that is already zero is nulled
/// by the bar state `theta = pi, phi = 0`. Returned elements are in
/// propagation order, i.e. `T_K` first.
pub fn reck_decompose(u: &DMatrix<C64>) -> Result<MeshPlan> {
    let n = u.nrows();
    if u.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.ncols() });
    }
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let deviation = unitarity_defect(u);
    if !(deviation < UNITARITY_TOL) {
        return Err(Error::NotUnitary { deviation });
    }
    let mut w = u.clone();
    let mut nulling = Vec::with_capacity(n * (n - 1) / 2);
    for c in 0..n.saturating_sub(1) {
        for r in (c + 1..n).rev() {
            let (a, b) = (w[(r - 1, c)], w[(r, c)]);
            let (theta, phi) = if b.norm() <= PIVOT_TOL {
                (PI, 0.0)
            } else {
                (2.0 * a.norm().atan2(b.norm()), wrap_phase(a.arg() - b.arg()))
            };
            let td = mzi_unitary(theta, phi).adjoint();
            for j in 0..n {
                let (x, y) = (w[(r - 1, j)], w[(r, j)]);
                w[(r - 1, j)] = td[(0, 0)] * x + td[(0, 1)] * y;
                w[(r, j)] = td[(1, 0)] * x + td[(1, 1)] * y;
            }
            nulling.push(MziSetting { i: r - 1, theta, phi });
        }
    }
    let screen = (0..n).map(|k| w[(k, k)].arg()).collect();
    nulling.reverse();
    Ok(MeshPlan { screen, elements: nulling })
}

/// Haar-distributed `U(n)` from the QR factorization of a complex Gaussian
/// matrix with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<C64> {
    let z = DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    q
}

/// Parse a square complex matrix stored as `N` rows of `2N` reals
/// alternating real and imaginary parts.
pub fn parse_unitary_csv(text: &str) -> Result<DMatrix<C64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::InvalidInput(format!("unitary csv: {e}")))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let vals = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidInput(format!("unitary csv row {}: {e}", line + 1)))?;
        rows.push(vals);
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::InvalidInput("unitary csv is empty".into()));
    }
    for row in &rows {
        if row.len() != 2 * n {
            return Err(Error::DimensionMismatch { expected: 2 * n, got: row.len() });
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| C64::new(rows[i][2 * j], rows[i][2 * j + 1])))
}

/// Inverse of [`parse_unitary_csv`].
pub fn write_unitary_csv(u: &DMatrix<C64>) -> String {
    let mut out = String::new();
    for i in 0..u.nrows() {
        let fields: Vec<String> = (0..u.ncols())
            .flat_map(|j| [format!("{:e}", u[(i, j)].re), format!("{:e}", u[(i, j)].im)])
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng() -> rand::rngs::StdRng {
        rand::rngs::StdRng::seed_from_u64(7)
    }

    #[test]
    fn scalar_case() {
        let u = DMatrix::from_element(1, 1, C64::from_polar(1.0, 0.8));
        let plan = reck_decompose(&u).unwrap();
        assert!(plan.elements.is_empty());
        assert!((plan.screen[0] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn two_mode_round_trip() {
        let u = haar_unitary(2, &mut rng());
        let plan = reck_decompose(&u).unwrap();
        assert_eq!(plan.elements.len(), 1);
        assert_eq!(plan.screen.len(), 2);
        assert!(max_deviation(&plan.to_matrix().unwrap(), &u) < 1e-12);
    }

    #[test]
    fn six_mode_mesh_size_and_ranges() {
        let u = haar_unitary(6, &mut rng());
        let plan = reck_decompose(&u).unwrap();
        assert_eq!(plan.elements.len(), 15);
        for e in &plan.elements {
            assert!((0.0..=PI).contains(&e.theta));
            assert!(e.phi > -PI && e.phi <= PI);
            assert!(e.i < 5);
        }
        assert!(max_deviation(&plan.to_matrix().unwrap(), &u) < 1e-12);
        assert_eq!(reck_decompose(&u).unwrap(), plan);
    }

    #[test]
    fn identity_uses_bar_states() {
        let plan = reck_decompose(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(plan.elements.len(), 6);
        assert!(plan.elements.iter().all(|e| e.theta == PI && e.phi == 0.0));
        assert!(max_deviation(&plan.to_matrix().unwrap(), &DMatrix::identity(4, 4)) < 1e-14);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(matches!(reck_decompose(&m), Err(Error::NotUnitary { .. })));
        assert!(matches!(
            reck_decompose(&DMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_checks_dimensions() {
        let plan = MeshPlan::identity(3);
        let x = vec![C64::new(1.0, 2.0), C64::new(0.0, -1.0), C64::new(0.5, 0.0)];
        assert_eq!(plan.apply(&x).unwrap(), x);
        assert!(matches!(plan.apply(&x[..2]), Err(Error::DimensionMismatch { .. })));
        let bad = MeshPlan { screen: vec![0.0; 2], elements: vec![MziSetting { i: 1, theta: 0.0, phi: 0.0 }] };
        assert!(matches!(bad.apply(&x[..2]), Err(Error::InvalidPort { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let u = haar_unitary(3, &mut rng());
        let back = parse_unitary_csv(&write_unitary_csv(&u)).unwrap();
        assert!(max_deviation(&back, &u) < 1e-15);
        assert!(matches!(parse_unitary_csv("1,0,0\n"), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(parse_unitary_csv("1,x\n"), Err(Error::InvalidInput(_))));
        assert!(parse_unitary_csv("").is_err());
    }
}
