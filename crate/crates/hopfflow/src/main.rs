use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hopfflow::commands::{cmd_classify, cmd_flow, cmd_generate, cmd_index};
use hopfflow::presets::PRESETS;
use hopfflow::{load, CliError, Overrides};

#[derive(Parser)]
#[command(name = "hopfflow", version, about = "Curvature line flows of zero mean curvature surfaces")]
struct Cli {
    /// Print the preset names and exit.
    #[arg(long)]
    list_presets: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Immersion coordinates and fundamental forms per node.
    Generate(Common),
    /// Node classification and counts.
    Classify(Common),
    /// Predicted and measured indices at the origin.
    Index(Common),
    /// Streamlines of the principal foliations as SVG.
    Flow(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    spec: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Nodes per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Winding circle radius.
    #[arg(long)]
    radius: Option<f64>,
    /// Samples on the winding circle.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    jet_cap: Option<usize>,
}

type Handler = fn(&hopfflow::Resolved, &std::path::Path) -> Result<Vec<PathBuf>, CliError>;

fn run(cmd: Command) -> Result<Vec<PathBuf>, CliError> {
    let (c, f): (&Common, Handler) = match &cmd {
        Command::Generate(c) => (c, cmd_generate),
        Command::Classify(c) => (c, cmd_classify),
        Command::Index(c) => (c, cmd_index),
        Command::Flow(c) => (c, cmd_flow),
    };
    let o = Overrides { grid: c.grid, radius: c.radius, samples: c.samples, jet_cap: c.jet_cap };
    let r = load(c.spec.as_deref(), c.preset.as_deref(), &o)?;
    f(&r, &c.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_presets {
        for p in PRESETS {
            println!("{p}");
        }
        return ExitCode::SUCCESS;
    }
    let Some(cmd) = cli.command else {
        eprintln!("hopfflow: a command is required (see --help)");
        return ExitCode::from(2);
    };
    match run(cmd) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hopfflow: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
