use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ctqw::config::{parse_kv, Command, RunConfig};
use ctqw::error::{CliError, Result};

#[derive(Parser)]
#[command(
    name = "ctqw",
    version,
    about = "Wigner functions of quantum walks on rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Eigenvalues and degeneracy classes of the network Hamiltonian
    Spectrum(Opts),
    /// Wigner function at one or more times
    Wigner(Opts),
    /// Long-time limiting Wigner function
    Limit(Opts),
    /// Position and momentum marginals
    Marginal(Opts),
    /// Half-period asymmetry maps (even N only)
    Asymmetry(Opts),
    /// Disorder-averaged limit over Watts–Strogatz realizations
    Ensemble(Opts),
}

#[derive(Args)]
struct Opts {
    /// Key–value configuration file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of nodes
    #[arg(long = "N")]
    n: Option<String>,
    /// Coupling range
    #[arg(long)]
    m: Option<String>,
    /// Initial node (defaults to N/2)
    #[arg(long)]
    j: Option<String>,
    /// Comma-separated times
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Exponential on-site disorder strength
    #[arg(long)]
    lambda: Option<String>,
    /// Watts–Strogatz rewiring probability
    #[arg(long)]
    p: Option<String>,
    /// Number of ensemble realizations
    #[arg(long)]
    real: Option<String>,
    /// Base seed for rewiring
    #[arg(long)]
    seed: Option<String>,
    /// Absolute degeneracy tolerance
    #[arg(long)]
    tol: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<String>,
    /// Also write PNG heatmaps
    #[arg(long)]
    png: bool,
    /// Pixels per heatmap cell
    #[arg(long)]
    cell: Option<String>,
    /// Colour-scale maximum
    #[arg(long)]
    vmax: Option<String>,
}

fn build_config(command: Command, opts: Opts) -> Result<RunConfig> {
    let mut map = match &opts.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_kv(&text)?
        }
        None => BTreeMap::new(),
    };
    map.insert("command".into(), command.name().into());
    let flags = [
        ("N", opts.n),
        ("m", opts.m),
        ("j", opts.j),
        ("t", opts.t),
        ("lambda", opts.lambda),
        ("p", opts.p),
        ("real", opts.real),
        ("seed", opts.seed),
        ("tol", opts.tol),
        ("out", opts.out),
        ("cell", opts.cell),
        ("vmax", opts.vmax),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            map.insert(key.into(), v);
        }
    }
    if opts.png {
        map.insert("png".into(), "true".into());
    }
    RunConfig::from_map(&map)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = e.print();
            } else {
                let msg = e.to_string();
                let first = msg.lines().next().unwrap_or("invalid arguments");
                eprintln!("ctqw: {}", first.trim_start_matches("error: "));
            }
            return ExitCode::from(code);
        }
    };
    let (command, opts) = match cli.command {
        Sub::Spectrum(o) => (Command::Spectrum, o),
        Sub::Wigner(o) => (Command::Wigner, o),
        Sub::Limit(o) => (Command::Limit, o),
        Sub::Marginal(o) => (Command::Marginal, o),
        Sub::Asymmetry(o) => (Command::Asymmetry, o),
        Sub::Ensemble(o) => (Command::Ensemble, o),
    };
    match build_config(command, opts).and_then(|c| ctqw::run(&c)) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ctqw: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
