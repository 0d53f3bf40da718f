use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use spinorsim::cli::{self, Command, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sub {
    /// Ground state, fragmentation report and psi(Y) profile
    Ground,
    /// Time series of populations, Y, T3 and all squeezing parameters
    Evolve,
    /// Squeezing parameters versus quadrature angle at one time
    Scan,
    /// eta, stationarity verdict and population drift of a coherent state
    Stationary,
    /// Identity and oracle suite with a pass/fail table
    Validate,
}

#[derive(Debug, Parser)]
#[command(
    name = "spinorsim",
    version,
    about = "Spin-1 condensate simulations in the single-mode approximation"
)]
struct Args {
    #[arg(value_enum)]
    subcommand: Sub,
    /// Run configuration (`key = value` lines)
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for the randomized draws of `validate`
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cmd = match args.subcommand {
        Sub::Ground => Command::Ground,
        Sub::Evolve => Command::Evolve,
        Sub::Scan => Command::Scan,
        Sub::Stationary => Command::Stationary,
        Sub::Validate => Command::Validate,
    };
    let fail = |e: spinorsim::Error| {
        eprintln!("spinorsim {}: {e}", cmd.name());
        ExitCode::from(cli::exit_code(&e) as u8)
    };
    let cfg = match RunConfig::from_file(&args.config)
        .and_then(|c| cli::check_command(cmd, &c).map(|_| c))
    {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = args.threads {
        pool = pool.num_threads(k.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return fail(spinorsim::Error::Io(e.to_string())),
    };
    let out = match pool.install(|| cli::run(cmd, &cfg, args.seed)) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    if let Err(e) = out.write_to(&args.out) {
        return fail(e);
    }
    print!("{}", out.summary);
    ExitCode::from(out.exit_code as u8)
}
