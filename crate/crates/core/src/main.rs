use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ramsey_scramble::harness::{
    parse_scenario, run_scenario, Format, Mode, Scenario, ScenarioError, EXIT_NOT_CONVERGED, EXIT_OK, EXIT_RUNTIME,
    EXIT_VALIDATION,
};

#[derive(Parser)]
#[command(name = "ramsey-scramble", version, about = "Scrambled Ramsey interferometry simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ramsey flop curves (modes normal, scrambled, retrieved)
    Flop(Common),
    /// Scrambled Bloch-vector distribution and its xz projection
    Sdbv(Common),
    /// Phase ambiguity against scramble area
    Ambiguity(Common),
    /// Scramble area maximizing the phase ambiguity
    Optimize(Common),
    /// Two-party secure choice protocol
    SecureChoice(Common),
    /// Monte Carlo trials and damped-sinusoid fit
    Fit(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file
    #[arg(long)]
    config: PathBuf,
    /// Override the noise seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: output.dir from the scenario, else `out`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output table format
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
}

impl Command {
    fn parts(&self) -> (&'static str, &[Mode], &Common) {
        match self {
            Command::Flop(c) => ("flop", &[Mode::Normal, Mode::Scrambled, Mode::Retrieved], c),
            Command::Sdbv(c) => ("sdbv", &[Mode::Sdbv], c),
            Command::Ambiguity(c) => ("ambiguity", &[Mode::AmbiguitySweep], c),
            Command::Optimize(c) => ("optimize", &[Mode::Optimize], c),
            Command::SecureChoice(c) => ("secure-choice", &[Mode::SecureChoice], c),
            Command::Fit(c) => ("fit", &[Mode::Fit], c),
        }
    }
}

fn load(command: &Command) -> Result<(Scenario, PathBuf), String> {
    let (name, modes, args) = command.parts();
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("reading {}: {e}", args.config.display()))?;
    let describe = |e: ScenarioError| format!("{}: [{}] {e}", args.config.display(), e.code());
    let mut scenario = parse_scenario(&text).map_err(describe)?;
    if !modes.contains(&scenario.mode) {
        return Err(format!("subcommand `{name}` cannot run a `{}` scenario", scenario.mode));
    }
    if let Some(seed) = args.seed {
        if let Some(noise) = scenario.noise.as_mut() {
            noise.seed = seed;
        }
    }
    if let Some(f) = &args.format {
        scenario.output.format = f.parse::<Format>().map_err(describe)?;
    }
    let out = args
        .out
        .clone()
        .or_else(|| scenario.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    Ok((scenario, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (scenario, out) = match load(&cli.command) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_VALIDATION as u8);
        }
    };
    for w in &scenario.warnings {
        eprintln!("warning: {w}");
    }
    match run_scenario(&scenario, &out) {
        Ok(outcome) => {
            for f in &outcome.files {
                println!("{}", f.display());
            }
            if outcome.converged {
                ExitCode::from(EXIT_OK as u8)
            } else {
                eprintln!("error: fit did not converge");
                ExitCode::from(EXIT_NOT_CONVERGED as u8)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME as u8)
        }
    }
}
