//! Finite-strain kinematics and third-order elasticity of diamond-cubic silicon.
//!
//! Strains use Voigt ordering `(xx, yy, zz, yz, xz, xy)` with engineering
//! shears, so `s4 = 2 s_yz`, `s5 = 2 s_xz`, `s6 = 2 s_xy`. With that choice
//! the second-order energy is `W2 = 1/2 c_IJ s_I s_J` with the standard cubic
//! stiffness matrix, and the stress is `T_I = dW/ds_I`.
//!
//! All moduli are in Pa and energies in J/m^3.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Matrix6, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GPA: f64 = 1e9;

/// Displacement gradient `g_ij = du_i/dr_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisplacementGradient(pub Matrix3<f64>);

impl DisplacementGradient {
    pub fn zero() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Self(Matrix3::from_fn(|i, j| rows[i][j]))
    }

    /// Deformation gradient `A = I + g`.
    pub fn deformation_gradient(&self) -> Matrix3<f64> {
        Matrix3::identity() + self.0
    }
}

/// Six Voigt strain components with engineering shears.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrainVoigt(pub [f64; 6]);

impl StrainVoigt {
    pub fn zero() -> Self {
        Self([0.0; 6])
    }

    pub fn as_vector(&self) -> Vector6<f64> {
        Vector6::from_column_slice(&self.0)
    }

    pub fn from_vector(v: &Vector6<f64>) -> Self {
        let mut s = [0.0; 6];
        s.copy_from_slice(v.as_slice());
        Self(s)
    }

    /// Whether every component satisfies `|s_I| < 1`, the range in which the
    /// cubic expansion of the energy is meaningful.
    pub fn within_expansion_bound(&self) -> bool {
        self.0.iter().all(|s| s.abs() < 1.0)
    }

    fn warn_if_large(&self) {
        if !self.within_expansion_bound() {
            log::warn!("strain {:?} exceeds |s_I| < 1; cubic expansion is unreliable", self.0);
        }
    }
}

/// Tensor strain components referenced to the `[110]`-aligned frame.
///
/// Shear entries are tensor components (not engineering shears).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameStrain {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
    pub yz: f64,
    pub xz: f64,
    pub xy: f64,
}

impl FrameStrain {
    /// Voigt vector of this strain in its own frame (engineering shears).
    pub fn to_voigt(&self) -> StrainVoigt {
        StrainVoigt([
            self.xx,
            self.yy,
            self.zz,
            2.0 * self.yz,
            2.0 * self.xz,
            2.0 * self.xy,
        ])
    }
}

/// Independent second- and third-order moduli of an `m3m` crystal, in Pa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicModuli {
    pub c11: f64,
    pub c12: f64,
    pub c44: f64,
    pub c111: f64,
    pub c112: f64,
    pub c123: f64,
    pub c144: f64,
    pub c166: f64,
    pub c456: f64,
}

impl CubicModuli {
    /// Moduli of single-crystal silicon (Hall, 1967).
    pub fn silicon() -> Self {
        Self {
            c11: 165.64 * GPA,
            c12: 63.94 * GPA,
            c44: 79.51 * GPA,
            c111: -795.0 * GPA,
            c112: -445.0 * GPA,
            c123: -75.0 * GPA,
            c144: 15.0 * GPA,
            c166: -310.0 * GPA,
            c456: -86.0 * GPA,
        }
    }

    /// Parse a JSON moduli override (`{"c11": ..., ...}`, values in Pa).
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("moduli: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.c11, self.c12, self.c44, self.c111, self.c112, self.c123, self.c144, self.c166,
            self.c456,
        ];
        if all.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("moduli must be finite".into()));
        }
        if !(self.c11 > 0.0 && self.c44 > 0.0 && self.c11 > self.c12.abs()) {
            return Err(Error::Domain(
                "moduli violate c11 > 0, c44 > 0, c11 > |c12|".into(),
            ));
        }
        Ok(())
    }

    /// Conventional 6x6 cubic stiffness matrix.
    pub fn stiffness(&self) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = if i == j { self.c11 } else { self.c12 };
            }
            m[(i + 3, i + 3)] = self.c44;
        }
        m
    }
}

impl Default for CubicModuli {
    fn default() -> Self {
        Self::silicon()
    }
}

/// Strain-dependent stiffness `c~_IJ`, symmetric by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhonoelasticMatrix(pub Matrix6<f64>);

impl PhonoelasticMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// `T = c~ s`.
    pub fn stress(&self, s: &StrainVoigt) -> StrainVoigt {
        StrainVoigt::from_vector(&(self.0 * s.as_vector()))
    }

    /// `1/2 s^T c~ s`.
    pub fn quadratic_form(&self, s: &StrainVoigt) -> f64 {
        let v = s.as_vector();
        0.5 * v.dot(&(self.0 * v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationSummary {
    /// `J = det(I + g)`.
    pub jacobian: f64,
    /// `rho0 / rho`, equal to the Jacobian.
    pub density_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyOrder {
    Second,
    Third,
}

/// Green-Lagrange strain `s_ij = 1/2 (g_ij + g_ji + g_ki g_kj)` packed to Voigt form.
pub fn green_lagrange_strain(g: &DisplacementGradient) -> StrainVoigt {
    let g = &g.0;
    let e = 0.5 * (g + g.transpose() + g.transpose() * g);
    StrainVoigt([
        e[(0, 0)],
        e[(1, 1)],
        e[(2, 2)],
        2.0 * e[(1, 2)],
        2.0 * e[(0, 2)],
        2.0 * e[(0, 1)],
    ])
}

/// Elastic strain energy density `W2` or `W2 + W3`.
pub fn strain_energy(s: &StrainVoigt, c: &CubicModuli, order: EnergyOrder) -> f64 {
    s.warn_if_large();
    let [s1, s2, s3, s4, s5, s6] = s.0;
    let w2 = 0.5 * c.c11 * (s1 * s1 + s2 * s2 + s3 * s3)
        + c.c12 * (s1 * s2 + s1 * s3 + s2 * s3)
        + 0.5 * c.c44 * (s4 * s4 + s5 * s5 + s6 * s6);
    if order == EnergyOrder::Second {
        return w2;
    }
    let w3 = c.c111 / 6.0 * (s1.powi(3) + s2.powi(3) + s3.powi(3))
        + 0.5
            * c.c112
            * (s1 * s1 * s2 + s1 * s1 * s3 + s1 * s2 * s2 + s1 * s3 * s3 + s2 * s2 * s3 + s2 * s3 * s3)
        + 0.5 * c.c144 * (s1 * s4 * s4 + s2 * s5 * s5 + s3 * s6 * s6)
        + 0.5
            * c.c166
            * (s1 * s5 * s5 + s1 * s6 * s6 + s2 * s4 * s4 + s2 * s6 * s6 + s3 * s4 * s4 + s3 * s5 * s5)
        + c.c123 * s1 * s2 * s3
        + c.c456 * s4 * s5 * s6;
    w2 + w3
}

/// Symmetric factorisation `dW/ds_I = c~_IJ s_J` of the third-order energy
/// in the `[100]` frame.
pub fn phonoelastic_tensor(s: &StrainVoigt, c: &CubicModuli) -> PhonoelasticMatrix {
    s.warn_if_large();
    let [s1, s2, s3, s4, s5, s6] = s.0;
    let h = 0.5;
    let mut m = Matrix6::zeros();
    let mut set = |i: usize, j: usize, v: f64| {
        m[(i - 1, j - 1)] = v;
        m[(j - 1, i - 1)] = v;
    };

    set(1, 1, c.c11 + h * c.c111 * s1 + h * c.c112 * (s2 + s3));
    set(1, 2, c.c12 + h * c.c112 * (s1 + s2) + h * c.c123 * s3);
    set(1, 3, c.c12 + h * c.c112 * (s1 + s3) + h * c.c123 * s2);
    set(1, 4, h * c.c144 * s4);
    set(1, 5, h * c.c166 * s5);
    set(1, 6, h * c.c166 * s6);

    set(2, 2, c.c11 + h * c.c111 * s2 + h * c.c112 * (s1 + s3));
    set(2, 3, c.c12 + h * c.c112 * (s2 + s3) + h * c.c123 * s1);
    set(2, 4, h * c.c166 * s4);
    set(2, 5, h * c.c144 * s5);
    set(2, 6, h * c.c166 * s6);

    set(3, 3, c.c11 + h * c.c111 * s3 + h * c.c112 * (s1 + s2));
    set(3, 4, h * c.c166 * s4);
    set(3, 5, h * c.c166 * s5);
    set(3, 6, h * c.c144 * s6);

    set(4, 4, c.c44 + h * c.c144 * s1 + h * c.c166 * (s2 + s3));
    set(4, 5, h * c.c456 * s6);
    set(4, 6, h * c.c456 * s5);

    set(5, 5, c.c44 + h * c.c144 * s2 + h * c.c166 * (s1 + s3));
    set(5, 6, h * c.c456 * s4);

    set(6, 6, c.c44 + h * c.c144 * s3 + h * c.c166 * (s1 + s2));

    PhonoelasticMatrix(m)
}

/// `[100]` Voigt strains from tensor strains given in the `[110]` frame
/// (rotation by pi/4 about `[001]`).
pub fn strain_frame_110_to_100(sp: &FrameStrain) -> StrainVoigt {
    let r2 = std::f64::consts::SQRT_2;
    StrainVoigt([
        0.5 * sp.xx - sp.xy + 0.5 * sp.yy,
        0.5 * sp.xx + sp.xy + 0.5 * sp.yy,
        sp.zz,
        r2 * (sp.xz + sp.yz),
        r2 * (sp.xz - sp.yz),
        sp.xx - sp.yy,
    ])
}

/// Bond matrix for a rotation by `xi` about `[001]`.
pub fn bond_matrix(xi: f64) -> Matrix6<f64> {
    let (s, c) = xi.sin_cos();
    let (s2, c2) = (2.0 * xi).sin_cos();
    #[rustfmt::skip]
    let m = Matrix6::new(
        c * c,      s * s,     0.0, 0.0, 0.0, s2,
        s * s,      c * c,     0.0, 0.0, 0.0, -s2,
        0.0,        0.0,       1.0, 0.0, 0.0, 0.0,
        0.0,        0.0,       0.0, c,   -s,  0.0,
        0.0,        0.0,       0.0, s,   c,   0.0,
        -0.5 * s2,  0.5 * s2,  0.0, 0.0, 0.0, c2,
    );
    m
}

/// `M(xi) m M(xi)^T`. The `[110]` frame is `xi = pi/4`.
pub fn bond_rotate(m: &PhonoelasticMatrix, xi: f64) -> PhonoelasticMatrix {
    let b = bond_matrix(xi);
    let r = b * m.0 * b.transpose();
    // Symmetrise away rounding so the result stays exactly symmetric.
    PhonoelasticMatrix(0.5 * (r + r.transpose()))
}

pub fn deformation_summary(g: &DisplacementGradient) -> Result<DeformationSummary> {
    let jacobian = g.deformation_gradient().determinant();
    if !(jacobian > 0.0) {
        return Err(Error::NonPhysicalDeformation { jacobian });
    }
    Ok(DeformationSummary {
        jacobian,
        density_ratio: jacobian,
    })
}

/// Change in path length of one lattice period of pitch `a` displaced by
/// `du` along and `dw` across the propagation axis.
pub fn path_dilatation(du: f64, dw: f64, a: f64) -> f64 {
    // hypot keeps the small-displacement difference accurate.
    (du + a).hypot(dw) - a
}

/// First-order phase change `dk L + k dL` of a guided wave whose operating
/// frequency shifts by `delta_f` (Hz) on a band with group velocity `v_g`.
///
/// A negative frequency shift gives a positive (forward) phase.
pub fn phase_accumulation(delta_f: f64, v_g: f64, length: f64, k: f64, delta_l: f64) -> Result<f64> {
    if !(v_g > 0.0) {
        return Err(Error::Domain(format!("group velocity must be positive, got {v_g}")));
    }
    let dk = 2.0 * PI * delta_f.abs() / v_g;
    let sign = if delta_f > 0.0 { -1.0 } else { 1.0 };
    Ok(sign * dk * length + k * delta_l)
}

/// Waveguide length giving a pi phase shift, `L = v_g / (2 |delta_f|)`.
pub fn pi_length(delta_f: f64, v_g: f64) -> Result<f64> {
    if !(v_g > 0.0) {
        return Err(Error::Domain(format!("group velocity must be positive, got {v_g}")));
    }
    if delta_f == 0.0 || !delta_f.is_finite() {
        return Err(Error::Domain("frequency shift must be non-zero".into()));
    }
    Ok(v_g / (2.0 * delta_f.abs()))
}
