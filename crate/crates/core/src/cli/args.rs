use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "phononic", version, about = "Strain-tuned phononic circuit toolkit")]
#[command(after_help = "Rates and frequency shifts are ordinary frequencies in Hz; they are converted to rad/s internally.")]
pub struct Cli {
    /// Write the primary result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Strain energy, phonoelastic stiffness and phase bookkeeping.
    #[command(subcommand)]
    Tensor(TensorCmd),
    /// SLH network composition.
    #[command(subcommand)]
    Slh(SlhCmd),
    /// Optimal write profiles and capture simulation.
    #[command(subcommand)]
    Memory(MemoryCmd),
    /// Interferometer mesh decomposition, calibration and mirror logic.
    #[command(subcommand)]
    Pmmi(PmmiCmd),
}

impl Command {
    pub fn name(&self) -> String {
        let verb = match self {
            Command::Tensor(c) => match c {
                TensorCmd::Energy { .. } => "energy",
                TensorCmd::Phonoelastic { .. } => "phonoelastic",
                TensorCmd::Bond { .. } => "bond",
                TensorCmd::Strain { .. } => "strain",
                TensorCmd::Phase { .. } => "phase",
                TensorCmd::PiLength { .. } => "pi-length",
            },
            Command::Slh(SlhCmd::Compose { .. }) => "compose",
            Command::Memory(c) => match c {
                MemoryCmd::Fidelity { .. } => "fidelity",
                MemoryCmd::Simulate { .. } => "simulate",
                MemoryCmd::Optimize { .. } => "optimize",
            },
            Command::Pmmi(c) => match c {
                PmmiCmd::Decompose { .. } => "decompose",
                PmmiCmd::Apply { .. } => "apply",
                PmmiCmd::Phase { .. } => "phase",
                PmmiCmd::Mirror { .. } => "mirror",
            },
        };
        let group = match self {
            Command::Tensor(_) => "tensor",
            Command::Slh(_) => "slh",
            Command::Memory(_) => "memory",
            Command::Pmmi(_) => "pmmi",
        };
        format!("{group} {verb}")
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MaterialArgs {
    /// Voigt strain `[xx,yy,zz,yz,xz,xy]` (engineering shears) as JSON, or `zeros`.
    #[arg(long)]
    pub strain: String,
    /// JSON file with moduli `c11 ... c456` in Pa (default: silicon).
    #[arg(long)]
    pub moduli: Option<String>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorCmd {
    /// Strain energy density in J/m^3.
    Energy {
        #[command(flatten)]
        material: MaterialArgs,
        #[arg(long, value_enum, default_value_t = OrderArg::Third)]
        order: OrderArg,
    },
    /// Strain-dependent 6x6 stiffness in Pa.
    Phonoelastic {
        #[command(flatten)]
        material: MaterialArgs,
    },
    /// Phonoelastic stiffness rotated about z by `xi`.
    Bond {
        #[command(flatten)]
        material: MaterialArgs,
        /// Rotation angle in rad.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        xi: f64,
    },
    /// Green-Lagrange strain and volume change of a displacement gradient.
    Strain {
        /// Row-major 3x3 displacement gradient as JSON.
        #[arg(long)]
        gradient: String,
    },
    /// Phase change of a guided wave under a band shift.
    Phase {
        #[arg(long, allow_negative_numbers = true)]
        delta_f_hz: f64,
        /// Group velocity in m/s.
        #[arg(long)]
        v_g: f64,
        /// Section length in m.
        #[arg(long)]
        length: f64,
        /// Operating wavenumber in rad/m.
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        /// Path length change in m.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta_l: f64,
    },
    /// Section length giving a pi phase shift.
    PiLength {
        #[arg(long, allow_negative_numbers = true)]
        delta_f_hz: f64,
        #[arg(long)]
        v_g: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderArg {
    Second,
    Third,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SlhCmd {
    /// Evaluate a network file to its composite triplet.
    Compose {
        #[arg(long)]
        network: String,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemoryCmd {
    /// Ideal capture fidelity and profile constants for `r / kappa_e`.
    Fidelity {
        #[arg(long)]
        ratio: f64,
        #[arg(long, default_value_t = crate::memory::DEFAULT_HORIZON)]
        horizon: f64,
    },
    /// Simulate one transfer (with delay when the config sets one).
    Simulate {
        #[arg(long)]
        config: String,
        /// Also write the trajectory CSV here.
        #[arg(long)]
        trajectory: Option<String>,
    },
    /// Grid search over mirror and detuning clock lags.
    Optimize {
        #[arg(long)]
        config: String,
        /// Mirror lag grid `start:stop:step` in ns.
        #[arg(long, default_value = "0:60:1", allow_hyphen_values = true)]
        dm_ns: String,
        /// Detuning lag grid `start:stop:step` in ns.
        #[arg(long, default_value = "-60:0:1", allow_hyphen_values = true)]
        dc_ns: String,
        /// Also write the full scan CSV here.
        #[arg(long)]
        scan: Option<String>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PmmiCmd {
    /// Decompose a unitary CSV into a phase screen and element mesh.
    Decompose {
        #[arg(long)]
        unitary: String,
    },
    /// Propagate amplitudes through a mesh plan.
    Apply {
        /// Mesh plan JSON.
        #[arg(long)]
        plan: String,
        /// Input amplitudes as JSON `[[re, im], ...]`.
        #[arg(long)]
        input: String,
    },
    /// Phase of a biased section from a calibration table.
    Phase {
        #[arg(long)]
        calibration: String,
        #[arg(long, allow_negative_numbers = true)]
        voltage: f64,
        /// Section length in waveguide periods.
        #[arg(long)]
        periods: f64,
        /// Group velocity in m/s (frequency tables only).
        #[arg(long, default_value_t = 312.0)]
        v_g: f64,
        /// Period in m.
        #[arg(long, default_value_t = 530e-9)]
        pitch: f64,
    },
    /// Whether a biased section transmits or reflects.
    Mirror {
        #[arg(long, allow_negative_numbers = true)]
        delta_f_hz: f64,
        #[arg(long)]
        band_edge_hz: f64,
    },
}
