//! SLH composition for linear passive quantum networks.
//!
//! A node is described by a triplet `(S, L, H)` where `S` is a scalar
//! scattering matrix, each coupling operator is linear in the internal modes
//! (`L_i = sum_j L[i, j] a_j`) and the Hamiltonian is quadratic
//! (`H = sum_jk h[j, k] a_j^dag a_k`, hbar = 1). This class is closed under
//! concatenation, the series product and feedback reduction, so every
//! composition is carried out exactly on coefficient matrices.
//!
//! Modes are identified by label. Composing two triplets works on the union
//! of their mode labels; a label present in both refers to the same mode.
//!
//! Ports are 0-based in this API. The network file format and the command
//! line use 1-based port numbers.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

const UNIT_LOOP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SlhTriplet {
    /// `n_ports x n_ports` scattering matrix.
    pub s: DMatrix<C64>,
    /// `n_ports x n_modes` coupling coefficients, sqrt(rad/s).
    pub l: DMatrix<C64>,
    /// `n_modes x n_modes` Hermitian Hamiltonian coefficients, rad/s.
    pub h: DMatrix<C64>,
    /// Mode labels, one per column of `l`.
    pub modes: Vec<String>,
}

/// Coefficients of the Heisenberg-Langevin equation
/// `da/dt = drift a + input_coupling a_in`.
#[derive(Debug, Clone, PartialEq)]
pub struct MasterEqCoeffs {
    /// `-i h - 1/2 L^dag L`, rad/s.
    pub drift: DMatrix<C64>,
    /// `-L^dag S`, sqrt(rad/s).
    pub input_coupling: DMatrix<C64>,
}

impl SlhTriplet {
    /// Build a triplet, checking shapes.
    pub fn new(s: DMatrix<C64>, l: DMatrix<C64>, h: DMatrix<C64>, modes: Vec<String>) -> Result<Self> {
        let n = s.nrows();
        if s.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s.ncols() });
        }
        if l.nrows() != n {
            return Err(Error::DimensionMismatch { expected: n, got: l.nrows() });
        }
        let m = modes.len();
        if l.ncols() != m {
            return Err(Error::DimensionMismatch { expected: m, got: l.ncols() });
        }
        if h.nrows() != m || h.ncols() != m {
            return Err(Error::DimensionMismatch { expected: m, got: h.nrows() });
        }
        for (i, a) in modes.iter().enumerate() {
            if modes[..i].contains(a) {
                return Err(Error::InvalidInput(format!("duplicate mode label {a:?}")));
            }
        }
        Ok(Self { s, l, h, modes })
    }

    pub fn n_ports(&self) -> usize {
        self.s.nrows()
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    /// Rename the internal modes (in column order).
    pub fn with_modes<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.n_modes() {
            return Err(Error::DimensionMismatch { expected: self.n_modes(), got: labels.len() });
        }
        self.modes = labels;
        Self::new(self.s, self.l, self.h, self.modes)
    }

    /// `max |S^dag S - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.n_ports();
        let d = self.s.adjoint() * &self.s - DMatrix::<C64>::identity(n, n);
        max_abs(&d)
    }

    /// `max |H - H^dag|`.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.h - self.h.adjoint()))
    }

    fn embed(&self, union: &[String]) -> (DMatrix<C64>, DMatrix<C64>) {
        let idx: Vec<usize> = self
            .modes
            .iter()
            .map(|m| union.iter().position(|u| u == m).expect("mode in union"))
            .collect();
        let n = union.len();
        let mut l = DMatrix::zeros(self.n_ports(), n);
        for (c, &u) in idx.iter().enumerate() {
            l.set_column(u, &self.l.column(c));
        }
        let mut h = DMatrix::zeros(n, n);
        for (r, &ur) in idx.iter().enumerate() {
            for (c, &uc) in idx.iter().enumerate() {
                h[(ur, uc)] = self.h[(r, c)];
            }
        }
        (l, h)
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn mode_union(a: &[String], b: &[String]) -> Vec<String> {
    let mut u = a.to_vec();
    for m in b {
        if !u.contains(m) {
            u.push(m.clone());
        }
    }
    u
}

/// Operator imaginary part `(X - X^dag) / 2i` of a quadratic form.
fn im_part(x: &DMatrix<C64>) -> DMatrix<C64> {
    (x - x.adjoint()) / C64::new(0.0, 2.0)
}

/// Single-mode cavity with two waveguide ports and one intrinsic-loss port.
///
/// Works in the frame rotating at the cavity frequency; `detuning` is the
/// residual `a^dag a` coefficient. The mode is labelled `"a_c"`.
pub fn cavity_node(kappa_e: f64, kappa_i: f64, detuning: f64) -> Result<SlhTriplet> {
    if !(kappa_e >= 0.0 && kappa_i >= 0.0) {
        return Err(Error::Domain(format!(
            "coupling rates must be non-negative (kappa_e = {kappa_e}, kappa_i = {kappa_i})"
        )));
    }
    if !detuning.is_finite() {
        return Err(Error::Domain("detuning must be finite".into()));
    }
    let ke = C64::new(kappa_e.sqrt(), 0.0);
    let ki = C64::new(kappa_i.sqrt(), 0.0);
    SlhTriplet::new(
        DMatrix::identity(3, 3),
        DMatrix::from_column_slice(3, 1, &[ke, ke, ki]),
        DMatrix::from_element(1, 1, C64::new(detuning, 0.0)),
        vec!["a_c".to_string()],
    )
}

/// One-port phase shifter `(e^{i theta}, 0, 0)`.
pub fn phase_node(theta: f64) -> SlhTriplet {
    SlhTriplet {
        s: DMatrix::from_element(1, 1, C64::from_polar(1.0, theta)),
        l: DMatrix::zeros(1, 0),
        h: DMatrix::zeros(0, 0),
        modes: Vec::new(),
    }
}

/// `n`-port identity `(I_n, 0, 0)`.
pub fn trivial_node(n: usize) -> Result<SlhTriplet> {
    if n == 0 {
        return Err(Error::Domain("a trivial node needs at least one port".into()));
    }
    Ok(SlhTriplet {
        s: DMatrix::identity(n, n),
        l: DMatrix::zeros(n, 0),
        h: DMatrix::zeros(0, 0),
        modes: Vec::new(),
    })
}

/// Parallel composition `g1 ⊞ g2`: ports of `g1` come first.
pub fn concatenate(g1: &SlhTriplet, g2: &SlhTriplet) -> SlhTriplet {
    let union = mode_union(&g1.modes, &g2.modes);
    let (l1, h1) = g1.embed(&union);
    let (l2, h2) = g2.embed(&union);
    let (n1, n2) = (g1.n_ports(), g2.n_ports());
    let mut s = DMatrix::zeros(n1 + n2, n1 + n2);
    s.view_mut((0, 0), (n1, n1)).copy_from(&g1.s);
    s.view_mut((n1, n1), (n2, n2)).copy_from(&g2.s);
    let mut l = DMatrix::zeros(n1 + n2, union.len());
    l.view_mut((0, 0), (n1, union.len())).copy_from(&l1);
    l.view_mut((n1, 0), (n2, union.len())).copy_from(&l2);
    SlhTriplet { s, l, h: h1 + h2, modes: union }
}

/// Series product `g2 ◁ g1`: the outputs of `g1` feed the inputs of `g2`.
///
/// `S = S2 S1`, `L = L2 + S2 L1`, `H = H1 + H2 + Im(L2^dag S2 L1)`.
pub fn series(g2: &SlhTriplet, g1: &SlhTriplet) -> Result<SlhTriplet> {
    if g1.n_ports() != g2.n_ports() {
        return Err(Error::PortMismatch { left: g1.n_ports(), right: g2.n_ports() });
    }
    let union = mode_union(&g1.modes, &g2.modes);
    let (l1, h1) = g1.embed(&union);
    let (l2, h2) = g2.embed(&union);
    let s = &g2.s * &g1.s;
    let s2l1 = &g2.s * &l1;
    let h = h1 + h2 + im_part(&(l2.adjoint() * &s2l1));
    Ok(SlhTriplet { s, l: l2 + s2l1, h, modes: union })
}

/// Feedback reduction `[out_port -> in_port]`: output `out_port` is fed back
/// into input `in_port` and both are removed from the port list.
pub fn feedback(g: &SlhTriplet, out_port: usize, in_port: usize) -> Result<SlhTriplet> {
    let n = g.n_ports();
    for p in [out_port, in_port] {
        if p >= n {
            return Err(Error::InvalidPort { index: p, n_ports: n });
        }
    }
    let (k, l) = (out_port, in_port);
    let gap = C64::new(1.0, 0.0) - g.s[(k, l)];
    if gap.norm() < UNIT_LOOP_TOL {
        return Err(Error::SingularLoop { out_port, in_port });
    }
    let gain = gap.inv();
    let rows: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let cols: Vec<usize> = (0..n).filter(|&j| j != l).collect();

    let s = DMatrix::from_fn(n - 1, n - 1, |r, c| {
        let (i, j) = (rows[r], cols[c]);
        g.s[(i, j)] + g.s[(i, l)] * gain * g.s[(k, j)]
    });
    let lk = g.l.row(k);
    let new_l = DMatrix::from_fn(n - 1, g.n_modes(), |r, m| {
        let i = rows[r];
        g.l[(i, m)] + g.s[(i, l)] * gain * lk[m]
    });
    // sum_j L_j^dag S_jl (1 - S_kl)^-1 L_k as a quadratic form in the modes.
    let col = g.l.adjoint() * g.s.column(l) * gain;
    let x = col * lk;
    let h = &g.h + im_part(&x);
    Ok(SlhTriplet { s, l: new_l, h, modes: g.modes.clone() })
}

/// Heisenberg-Langevin coefficients of a linear passive triplet.
pub fn master_eq_coeffs(g: &SlhTriplet) -> MasterEqCoeffs {
    let minus_i = C64::new(0.0, -1.0);
    let ldag = g.l.adjoint();
    let drift = &g.h * minus_i - (&ldag * &g.l) * C64::new(0.5, 0.0);
    let input_coupling = -(ldag * &g.s);
    MasterEqCoeffs { drift, input_coupling }
}

/// Total raw output power rate `2 kappa_e (1 + cos theta)` of the cavity
/// whose right-going output returns after a phase `theta`.
pub fn effective_rate(theta: f64, kappa_e: f64) -> Result<f64> {
    if !(kappa_e >= 0.0) {
        return Err(Error::Domain(format!("kappa_e must be non-negative, got {kappa_e}")));
    }
    Ok(2.0 * kappa_e * (1.0 + theta.cos()))
}

/// Cavity fed back onto itself through a mirror arm of round-trip phase
/// `theta`: `((G2 ⊞ 1₂) ◁ G1)[1 -> 2]`.
pub fn tunable_cavity(kappa_e: f64, kappa_i: f64, theta: f64) -> Result<SlhTriplet> {
    let cavity = cavity_node(kappa_e, kappa_i, 0.0)?;
    let arm = concatenate(&phase_node(theta), &trivial_node(2)?);
    feedback(&series(&arm, &cavity)?, 0, 1)
}

/// Tunable cavity with counter-rotating input/output phase shifters and a
/// compensating cavity detuning `-kappa_e sin theta`, which removes both the
/// input phase and the feedback-induced detuning.
pub fn compensated_tunable_cavity(kappa_e: f64, kappa_i: f64, theta: f64) -> Result<SlhTriplet> {
    let one = trivial_node(1)?;
    let two = trivial_node(2)?;
    let input_shift = phase_node(-theta / 2.0);
    let output_shift = phase_node(-theta / 2.0);
    let cavity = cavity_node(kappa_e, kappa_i, -kappa_e * theta.sin())?;
    let arm = phase_node(theta);

    let fed = series(&cavity, &concatenate(&input_shift, &two))?;
    let looped = series(&concatenate(&arm, &two), &fed)?;
    let out = concatenate(&concatenate(&one, &output_shift), &one);
    feedback(&series(&out, &looped)?, 0, 1)
}

/// Serializable view of a triplet; complex entries are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripletJson {
    pub n_ports: usize,
    pub n_modes: usize,
    pub modes: Vec<String>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "H")]
    pub h: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MasterEqJson {
    pub drift: Vec<Vec<[f64; 2]>>,
    pub input_coupling: Vec<Vec<[f64; 2]>>,
}

pub(crate) fn matrix_rows(m: &DMatrix<C64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl From<&SlhTriplet> for TripletJson {
    fn from(g: &SlhTriplet) -> Self {
        Self {
            n_ports: g.n_ports(),
            n_modes: g.n_modes(),
            modes: g.modes.clone(),
            s: matrix_rows(&g.s),
            l: matrix_rows(&g.l),
            h: matrix_rows(&g.h),
        }
    }
}

impl From<&MasterEqCoeffs> for MasterEqJson {
    fn from(m: &MasterEqCoeffs) -> Self {
        Self {
            drift: matrix_rows(&m.drift),
            input_coupling: matrix_rows(&m.input_coupling),
        }
    }
}

pub mod network {
    //! JSON network descriptions.
    //!
    //! ```json
    //! {
    //!   "nodes": [
    //!     {"id": "cav", "kind": "cavity", "params": {"kappa_e_hz": 3e5, "kappa_i_hz": 1}},
    //!     {"id": "arm", "kind": "phase", "params": {"theta": 1.0}},
    //!     {"id": "two", "kind": "trivial", "params": {"n": 2}}
    //!   ],
    //!   "script": [
    //!     {"op": "concat", "args": ["arm", "two"], "out": "arm3"},
    //!     {"op": "series", "args": ["arm3", "cav"], "out": "open"},
    //!     {"op": "feedback", "args": {"system": "open", "out_port": 1, "in_port": 2}, "out": "net"}
    //!   ]
    //! }
    //! ```
    //!
    //! Rates are ordinary frequencies in Hz and are multiplied by 2π. Ports are
    //! 1-based. `series` arguments read left to right as `a ◁ b ◁ c`. The
    //! result is the output of the last script step, or the only node when the
    //! script is empty.

    use std::collections::HashMap;
    use std::f64::consts::PI;

    use serde::Deserialize;

    use super::*;

    #[derive(Debug, Clone, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct NetworkSpec {
        pub nodes: Vec<NodeSpec>,
        #[serde(default)]
        pub script: Vec<Step>,
    }

    #[derive(Debug, Clone, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct NodeSpec {
        pub id: String,
        pub kind: NodeKind,
        #[serde(default)]
        pub params: NodeParams,
    }

    #[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
    #[serde(rename_all = "lowercase")]
    pub enum NodeKind {
        Cavity,
        Phase,
        Trivial,
    }

    #[derive(Debug, Clone, Default, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct NodeParams {
        pub kappa_e_hz: Option<f64>,
        pub kappa_i_hz: Option<f64>,
        pub detuning_hz: Option<f64>,
        pub mode: Option<String>,
        pub theta: Option<f64>,
        pub n: Option<usize>,
    }

    #[derive(Debug, Clone, Deserialize)]
    #[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
    pub enum Step {
        Concat { args: Vec<String>, out: String },
        Series { args: Vec<String>, out: String },
        Feedback { args: FeedbackArgs, out: String },
    }

    #[derive(Debug, Clone, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct FeedbackArgs {
        pub system: String,
        pub out_port: usize,
        pub in_port: usize,
    }

    fn build_node(node: &NodeSpec) -> Result<SlhTriplet> {
        let p = &node.params;
        let missing = |what: &str| Error::InvalidInput(format!("node {:?}: missing {what}", node.id));
        match node.kind {
            NodeKind::Cavity => {
                let ke = p.kappa_e_hz.ok_or_else(|| missing("kappa_e_hz"))?;
                let ki = p.kappa_i_hz.unwrap_or(0.0);
                let det = p.detuning_hz.unwrap_or(0.0);
                let g = cavity_node(2.0 * PI * ke, 2.0 * PI * ki, 2.0 * PI * det)?;
                match &p.mode {
                    Some(m) => g.with_modes([m.clone()]),
                    None => Ok(g),
                }
            }
            NodeKind::Phase => Ok(phase_node(p.theta.ok_or_else(|| missing("theta"))?)),
            NodeKind::Trivial => trivial_node(p.n.ok_or_else(|| missing("n"))?),
        }
    }

    impl NetworkSpec {
        pub fn from_json(text: &str) -> Result<Self> {
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("network: {e}")))
        }

        /// Build every node and run the composition script.
        pub fn evaluate(&self) -> Result<SlhTriplet> {
            let mut env: HashMap<String, SlhTriplet> = HashMap::new();
            for node in &self.nodes {
                if env.insert(node.id.clone(), build_node(node)?).is_some() {
                    return Err(Error::InvalidInput(format!("duplicate node id {:?}", node.id)));
                }
            }
            let lookup = |env: &HashMap<String, SlhTriplet>, id: &str| {
                env.get(id)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("unknown node {id:?}")))
            };
            let mut last = None;
            for step in &self.script {
                let (out, value) = match step {
                    Step::Concat { args, out } => {
                        let mut it = args.iter();
                        let first = it
                            .next()
                            .ok_or_else(|| Error::InvalidInput("concat needs arguments".into()))?;
                        let mut acc = lookup(&env, first)?;
                        for id in it {
                            acc = concatenate(&acc, &lookup(&env, id)?);
                        }
                        (out, acc)
                    }
                    Step::Series { args, out } => {
                        let mut it = args.iter().rev();
                        let first = it
                            .next()
                            .ok_or_else(|| Error::InvalidInput("series needs arguments".into()))?;
                        let mut acc = lookup(&env, first)?;
                        for id in it {
                            acc = series(&lookup(&env, id)?, &acc)?;
                        }
                        (out, acc)
                    }
                    Step::Feedback { args, out } => {
                        if args.out_port == 0 || args.in_port == 0 {
                            return Err(Error::InvalidInput("ports are 1-based".into()));
                        }
                        let g = lookup(&env, &args.system)?;
                        (out, feedback(&g, args.out_port - 1, args.in_port - 1)?)
                    }
                };
                env.insert(out.clone(), value);
                last = Some(out.clone());
            }
            match last {
                Some(id) => lookup(&env, &id),
                None if self.nodes.len() == 1 => lookup(&env, &self.nodes[0].id),
                None => Err(Error::InvalidInput(
                    "an empty script needs exactly one node".into(),
                )),
            }
        }
    }
}
