mod diag;
mod outcome;
mod simulate;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::diag::CommSettings;
use crate::outcome::{Failure, Fields, Reporter};

#[derive(Parser, Debug)]
#[command(name = "multiflow", version, about = "Multi-constituent compressible flow in 1-D")]
struct Cli {
    /// Suppress everything except the final RESULT line and errors.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Output directory; overrides the one named in the config.
    #[arg(long, global = true, env = "MULTIFLOW_OUT")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ConfigArg {
    #[arg(value_name = "CONFIG", required_unless_present = "config")]
    path: Option<PathBuf>,
    #[arg(long = "config", value_name = "CONFIG", conflicts_with = "path")]
    config: Option<PathBuf>,
}

impl ConfigArg {
    fn get(&self) -> &Path {
        self.config.as_deref().or(self.path.as_deref()).expect("clap enforces a config path")
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a config and report viscosity admissibility.
    Validate(ConfigArg),
    /// Time-integrate a config and write time series and snapshots.
    Run(ConfigArg),
    /// Relax a wall-bounded config to a steady state.
    Steady(ConfigArg),
    /// Spectral diagnostics on the periodic square.
    #[command(subcommand)]
    Diag(Diag),
    /// Repeat a run for several values of one config key.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Dotted key, e.g. `pressure.gamma`.
        #[arg(long)]
        param: String,
        /// Values, comma or space separated.
        #[arg(long, num_args = 0.., allow_negative_numbers = true)]
        values: Vec<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Diag {
    /// Divergence identity and self-adjointness on random fields.
    Identity {
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Commutator expansion checks.
    Comm {
        /// TOML file with a `[comm]` table (n, seed, samples).
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Weak limits of oscillating density sequences.
    WeakLimit {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Run(_) => "run",
            Command::Steady(_) => "steady",
            Command::Diag(Diag::Identity { .. }) => "diag-identity",
            Command::Diag(Diag::Comm { .. }) => "diag-comm",
            Command::Diag(Diag::WeakLimit { .. }) => "diag-weak-limit",
            Command::Sweep { .. } => "sweep",
        }
    }
}

fn dispatch(cli: &Cli, rep: Reporter) -> Result<Fields, Failure> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Validate(c) => simulate::validate(c.get(), rep),
        Command::Run(c) => simulate::run(c.get(), out, rep),
        Command::Steady(c) => simulate::steady(c.get(), out, rep),
        Command::Diag(Diag::Identity { n, seed }) => diag::identity(*n, *seed, out, rep),
        Command::Diag(Diag::Comm { spec, n, seed, samples }) => {
            let mut s = CommSettings { n: 128, seed: 0, samples: 4 };
            if let Some(path) = spec {
                s = s.apply_file(path)?;
            }
            s.n = n.unwrap_or(s.n);
            s.seed = seed.unwrap_or(s.seed);
            s.samples = samples.unwrap_or(s.samples);
            if s.samples == 0 {
                return Err(Failure::invalid("--samples must be positive"));
            }
            diag::comm_check(s, out, rep)
        }
        Command::Diag(Diag::WeakLimit { spec, n }) => diag::weak_limit(spec.as_deref(), *n, out, rep),
        Command::Sweep { config, param, values, jobs } => {
            let dir = match out {
                Some(d) => d.to_path_buf(),
                None => config.parent().map(Path::to_path_buf).unwrap_or_default().join("sweep"),
            };
            sweep::sweep(config, param, &sweep::split_values(values), *jobs, &dir, rep)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let rep = Reporter { quiet: cli.quiet };
    let name = cli.command.name();
    let mut result = Fields::new();
    result.push("command", name);
    match dispatch(&cli, rep) {
        Ok(fields) => {
            result.push("status", "ok").push("code", 0);
            result.extend(fields);
            println!("{}", result.result_line());
            ExitCode::SUCCESS
        }
        Err(failure) => {
            for m in failure.messages() {
                eprintln!("error: {m}");
            }
            result.push("status", "error").push("code", failure.code());
            println!("{}", result.result_line());
            ExitCode::from(failure.code())
        }
    }
}
