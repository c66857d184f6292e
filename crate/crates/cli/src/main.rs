mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ctsda", version, about = "Cascaded time-space Doppler ambiguity toolkit for multichannel SAR")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Emit JSON instead of text.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (tabular subcommands only).
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write output to this file instead of stdout; a `<out>.manifest.json`
    /// is written next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker thread cap for parallel stages.
    #[arg(long, global = true, env = "CTSDA_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a system configuration and print its blind speeds.
    Classify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Cascaded folds of one velocity, or a sawtooth table over a grid.
    Fold {
        #[arg(long)]
        config: PathBuf,
        /// Single radial velocity (m/s); overrides the grid.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<f64>,
        #[arg(long, default_value_t = -60.0, allow_hyphen_values = true)]
        v_min: f64,
        #[arg(long, default_value_t = 60.0, allow_hyphen_values = true)]
        v_max: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
    },
    /// Recover the radial velocity from folded per-carrier observations.
    Retrieve(RetrieveArgs),
    /// Single-carrier determinable size as one system parameter varies.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Carrier wavelength (m); defaults to the first configured one.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, value_enum)]
        vary: Vary,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Determinable velocity size of wavelength pairs by residue enumeration.
    Enumerate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Wavelength pair `l1,l2` (m); repeatable. Defaults to the ten
        /// pairs (0.02,0.03) ... (0.11,0.12).
        #[arg(long = "pair", value_parser = parse_pair)]
        pairs: Vec<(f64, f64)>,
    },
    /// Simulate slow-time echoes, estimate each carrier's folded velocity,
    /// and retrieve the radial velocity.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// True radial velocity (m/s).
        #[arg(long, allow_hyphen_values = true)]
        v_r: f64,
        /// Target ground range at zero time (m); defaults to 0.8 R_0.
        #[arg(long)]
        y0: Option<f64>,
        /// Per-sample SNR (dB); noiseless when omitted.
        #[arg(long, allow_hyphen_values = true)]
        snr_db: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pulses per channel; defaults to the illumination time times the PRF.
        #[arg(long)]
        pulses: Option<usize>,
        #[arg(long, default_value_t = ctsda::sim::DEFAULT_ZERO_PAD)]
        zero_pad: usize,
    },
    /// RMSE of the searching solver versus the remainder error bound.
    Montecarlo {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest error bound; the grid runs down to zero.
        #[arg(long, default_value_t = 1.0)]
        xi_max: f64,
        #[arg(long, default_value_t = 0.05)]
        xi_step: f64,
    },
}

#[derive(Args, Debug)]
pub struct RetrieveArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Observation `<index>=<v_space>` with 1-based carrier index; repeatable.
    #[arg(long = "obs", value_parser = parse_obs, allow_hyphen_values = true)]
    pub obs: Vec<(usize, f64)>,
    /// CSV of observations with header `lambda,v_space`.
    #[arg(long, conflicts_with = "obs")]
    pub obs_csv: Option<PathBuf>,
    /// Bound on the remainder errors (m/s).
    #[arg(long, default_value_t = ctsda::solvers::DEFAULT_XI_E)]
    pub xi_e: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Search range width (m/s); defaults to the determinable size.
    #[arg(long)]
    pub v_range: Option<f64>,
    /// Grid step of the oracle scan (m/s).
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    Auto,
    Crt,
    Theorem1,
    Search,
    Oracle,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Vary {
    Prf,
    Spacing,
    PlatformVelocity,
}

fn parse_obs(s: &str) -> Result<(usize, f64), String> {
    let (i, v) = s.split_once('=').ok_or_else(|| format!("expected <index>=<v_space>, got `{s}`"))?;
    let i: usize = i.trim().parse().map_err(|e| format!("bad carrier index `{i}`: {e}"))?;
    if i == 0 {
        return Err("carrier indices start at 1".into());
    }
    let v: f64 = v.trim().parse().map_err(|e| format!("bad velocity `{v}`: {e}"))?;
    Ok((i, v))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected l1,l2, got `{s}`"))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad wavelength `{x}`: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli.command, &cli.global) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use ctsda::Error;
    match err.downcast_ref::<Error>() {
        Some(Error::NoSolution { .. }) => 3,
        Some(Error::Ambiguous { .. }) => 4,
        Some(Error::Estimation(_)) => 5,
        _ => 2,
    }
}
