use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rephat::cli::{run, Command, RunConfig};

#[derive(Parser)]
#[command(version, about = "Repetitive algebras, Auslander-Reiten sequences and stable triangles")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// Lowest and highest degree of the window.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, global = true)]
    window: Option<Vec<i64>>,
    /// Longest string enumerated for universes and listings.
    #[arg(long, default_value_t = 4, global = true)]
    max_len: usize,
    /// Largest intermediate module used in radical-square searches.
    #[arg(long, global = true)]
    universe_dim: Option<usize>,
    /// Field characteristic: 0 or one of 2, 3, 5, 7, 101.
    #[arg(long = "char", default_value_t = 0, global = true)]
    characteristic: u64,
    /// Seed word, e.g. `e_2_0` or `t_0^-1 ahat_0`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Number of meshes to knit.
    #[arg(long, default_value_t = 30, global = true)]
    steps: usize,
    /// Directory for artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Compare against the shipped golden files.
    #[arg(long, global = true)]
    check: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a presentation and report whether it is gentle.
    Validate { input: PathBuf },
    /// Build and serialize a window of the repetitive quiver.
    Repetitive { input: PathBuf },
    /// Enumerate strings in the window.
    Strings { input: PathBuf },
    /// Auslander-Reiten sequence starting at the seed, with an axiom report.
    Ar { input: PathBuf },
    /// Knit the component of the seed and export it.
    Knit { input: PathBuf },
    /// Classify every triangle of the knitted component.
    Triangles { input: PathBuf },
    /// Run the shipped worked example end to end.
    Example4 { input: Option<PathBuf> },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (command, input) = match args.command {
        Cmd::Validate { input } => (Command::Validate, Some(input)),
        Cmd::Repetitive { input } => (Command::Repetitive, Some(input)),
        Cmd::Strings { input } => (Command::Strings, Some(input)),
        Cmd::Ar { input } => (Command::Ar, Some(input)),
        Cmd::Knit { input } => (Command::Knit, Some(input)),
        Cmd::Triangles { input } => (Command::Triangles, Some(input)),
        Cmd::Example4 { input } => (Command::Example4, input),
    };
    let mut config = RunConfig::new(command);
    config.input = input;
    if let Some(w) = args.window {
        config.window = (w[0], w[1]);
    }
    config.max_len = args.max_len;
    config.universe_dim = args.universe_dim;
    config.characteristic = args.characteristic;
    config.seed = args.seed;
    config.steps = args.steps;
    config.out = args.out;
    config.check = args.check;
    match run(&config) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            if outcome.violations > 0 {
                eprintln!("error: violation: {} theorem violations", outcome.violations);
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
