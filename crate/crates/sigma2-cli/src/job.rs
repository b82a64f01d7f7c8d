//! Command-line surface. The parsed command doubles as the serialized job record that every
//! JSON result echoes back under "job".

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "sigma2", version, about = "Degenerate genus-2 sigma-functions")]
pub struct Cli {
    #[command(flatten)]
    pub cfg: CfgArgs,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn job(&self) -> JobSpec {
        JobSpec {
            command: self.command.clone(),
            cfg: self.cfg.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub command: Command,
    pub cfg: CfgArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CfgArgs {
    /// Verification tolerance.
    #[arg(long, global = true, env = "SIGMA2_TOL", default_value_t = 1e-10)]
    pub tol: f64,
    /// Base finite-difference step.
    #[arg(long, global = true, env = "SIGMA2_FD_STEP", default_value_t = 1e-4)]
    pub fd_step: f64,
}

/// Complex inputs are comma-separated reals, e.g. `--a2 0.3,-0.1` for (re, im).
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Classify λ = (λ4, λ6, λ8, λ10): 4 reals, or 8 reals as (re, im) pairs.
    Classify {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<f64>,
    },
    /// Evaluate σ(u3, u1) on Λ1 (--a2, --gamma) or Λ0 (--lambda0), optionally over a grid.
    Sigma {
        #[command(flatten)]
        moduli: Moduli,
        /// u3 and u1 as re,im,re,im.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "0.1,0,0.2,0"
        )]
        u: Vec<f64>,
        /// Skip the normalization making the leading part exactly u3 − u1³/3.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        grid: Grid,
    },
    /// Jacobi inversion at (U1, U3) on Λ1, or in the rational limit with --rational-alpha.
    Invert {
        #[command(flatten)]
        moduli: Moduli,
        #[arg(long = "U1", value_delimiter = ',', allow_hyphen_values = true)]
        big_u1: Vec<f64>,
        #[arg(long = "U3", value_delimiter = ',', allow_hyphen_values = true)]
        big_u3: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        rational_alpha: Option<Vec<f64>>,
    },
    /// Real potential family on a real rectangular lattice; --csv writes the samples.
    Potential {
        /// γ4, γ6 (real).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gamma: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Vec<f64>,
        #[arg(long, value_enum, default_value_t = FamilyArg::V1)]
        family: FamilyArg,
        #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Period matrices T, H, K1, K2, K3 and the Legendre check on Λ1.
    Periods {
        #[command(flatten)]
        moduli: Moduli,
    },
    /// Run verification suites: "all", a suite name or a criterion number.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, env = "SIGMA2_SEED", default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    V1,
    V2,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Moduli {
    /// a2 as re,im.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a2: Option<Vec<f64>>,
    /// γ4, γ6 as re,im,re,im.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub gamma: Option<Vec<f64>>,
    /// Λ0 chart (a2, b2) as re,im,re,im.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["a2", "gamma"])]
    pub lambda0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Grid {
    /// Points per side of a (u3, u1) real grid over [−extent, extent]²; needs --csv.
    #[arg(long, requires = "csv")]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub extent: f64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}
