//! `lpcb`: design, label, evaluate and simulate low-projection SCMA
//! codebooks.
//!
//! Exit codes: 0 success, 2 invalid input, 3 runtime failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lpcb_core::simulator::DecoderKind;

use config::{
    load_section, ComplexitySettings, DesignSettings, EvalMode, EvalSettings, Grid, InputError, Kappa,
    LabelSettings, SimulateSettings,
};

#[derive(Parser)]
#[command(name = "lpcb", version, about = "Low-projection SCMA codebook design and simulation")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON settings; a top-level object named after the subcommand is used if present
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker thread cap
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Build a codebook from scratch
    Design(DesignArgs),
    /// Relabel the codewords of an existing codebook
    Label(LabelArgs),
    /// Report MED, MPD, minimum Rician distance and its lower bound
    Eval(EvalArgs),
    /// Bit error rate sweep
    Simulate(SimulateArgs),
    /// Detector operation counts and reduction ratio
    Complexity(ComplexityArgs),
    /// Check a codebook file
    Validate(ValidateArgs),
}

#[derive(Args)]
struct DesignArgs {
    #[arg(short = 'M', long = "m")]
    m: Option<usize>,
    #[arg(short = 'T', long = "t")]
    t: Option<usize>,
    /// 150 or 200
    #[arg(long)]
    overload: Option<u32>,
    /// Rician factor, a number or inf
    #[arg(long)]
    kappa: Option<Kappa>,
    #[arg(long)]
    ebn0: Option<f64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Monte-Carlo sample size for the lower-bound objective
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    t_max: Option<usize>,
}

#[derive(Args)]
struct LabelArgs {
    #[arg(long)]
    codebook: Option<PathBuf>,
    #[arg(long)]
    kappa: Option<Kappa>,
    #[arg(long)]
    ebn0: Option<f64>,
    #[arg(long)]
    label_iters: Option<usize>,
    #[arg(long)]
    label_restarts: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    codebook: Option<PathBuf>,
    #[arg(long)]
    kappa: Option<Kappa>,
    #[arg(long)]
    ebn0: Option<f64>,
    /// auto, exhaustive, montecarlo or branch_and_bound
    #[arg(long)]
    mode: Option<EvalMode>,
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    t_max: Option<usize>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    codebook: Option<PathBuf>,
    /// Eb/N0 grid in dB, a:b:step or a single value
    #[arg(long)]
    ebn0: Option<Grid>,
    /// Rician factor, a number or inf; repeat for several
    #[arg(long)]
    kappa: Vec<Kappa>,
    #[arg(long)]
    frames: Option<u64>,
    /// mpa or lp-mpa
    #[arg(long)]
    decoder: Option<DecoderKind>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ComplexityArgs {
    /// Read T, d_f, N and J from a codebook
    #[arg(long)]
    codebook: Option<PathBuf>,
    #[arg(short = 'T', long = "t")]
    t: Option<u64>,
    #[arg(long)]
    d_f: Option<u64>,
    #[arg(short = 'N', long = "n")]
    n: Option<u64>,
    #[arg(short = 'J', long = "j")]
    j: Option<u64>,
    #[arg(long)]
    i_t: Option<u64>,
    #[arg(long)]
    baseline_t: Option<u64>,
    #[arg(long)]
    baseline_i_t: Option<u64>,
}

#[derive(Args)]
struct ValidateArgs {
    codebook: PathBuf,
}

/// Copy every flag that was given over the setting of the same name.
macro_rules! overlay {
    ($settings:expr, $args:expr, $($field:ident),*) => {
        $(if let Some(v) = $args.$field.clone() { $settings.$field = v; })*
    };
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        if n == 0 {
            return Err(config::input_error("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let cfg = g.config.as_deref();
    let written = match &cli.command {
        Command::Design(a) => {
            let mut s: DesignSettings = load_section(cfg, "design")?;
            overlay!(s, a, m, t, overload, kappa, restarts, q, t_max);
            overlay!(s, g, seed);
            if let Some(v) = a.ebn0 {
                s.ebn0_db = v;
            }
            if a.max_iters.is_some() {
                s.max_iters = a.max_iters;
            }
            commands::design(&s.finish()?, &g.out)?
        }
        Command::Label(a) => {
            let mut s: LabelSettings = load_section(cfg, "label")?;
            overlay!(s, a, kappa, label_iters, label_restarts);
            overlay!(s, g, seed);
            if let Some(v) = a.ebn0 {
                s.ebn0_db = v;
            }
            if a.codebook.is_some() {
                s.codebook = a.codebook.clone();
            }
            commands::label(&s, &g.out)?
        }
        Command::Eval(a) => {
            let mut s: EvalSettings = load_section(cfg, "eval")?;
            overlay!(s, a, kappa, mode, cap, q, t_max);
            overlay!(s, g, seed);
            if let Some(v) = a.ebn0 {
                s.ebn0_db = v;
            }
            if a.codebook.is_some() {
                s.codebook = a.codebook.clone();
            }
            commands::eval(&s, &g.out)?
        }
        Command::Simulate(a) => {
            let mut s: SimulateSettings = load_section(cfg, "simulate")?;
            overlay!(s, a, frames, decoder, max_iters, tol);
            overlay!(s, g, seed);
            if let Some(v) = &a.ebn0 {
                s.ebn0_db = v.0.clone();
            }
            if !a.kappa.is_empty() {
                s.kappa = a.kappa.clone();
            }
            if a.codebook.is_some() {
                s.codebook = a.codebook.clone();
            }
            commands::simulate(&s, &g.out)?
        }
        Command::Complexity(a) => {
            let mut s: ComplexitySettings = load_section(cfg, "complexity")?;
            overlay!(s, a, t, d_f, n, j, i_t, baseline_t, baseline_i_t);
            if a.codebook.is_some() {
                s.codebook = a.codebook.clone();
            }
            commands::complexity(&s, &g.out)?
        }
        Command::Validate(a) => {
            println!("{}", commands::validate(&a.codebook)?);
            Vec::new()
        }
    };
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InputError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<lpcb_core::Error>() {
        Some(e) if e.is_validation() => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
