//! `srvt`: distances, distance matrices, geodesics and alignment of sampled curves.

mod commands;
mod number;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "srvt", version, about = "Square root velocity shape analysis of sampled curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the distance between two curves.
    Distance {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write the CSV distance matrix of all curve files in a directory.
    Matrix {
        dir: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Output CSV file (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write `k + 1` curves along the geodesic between two curves.
    Geodesic {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Align the second curve to the first; writes the warped curve and the warp.
    Align {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// L2 distance of the transforms.
    Plain,
    /// Plain distance plus the distance between starting points.
    Based,
    /// Distance minimized over reparametrizations.
    Shape,
}

#[derive(Args, Clone)]
pub struct Common {
    /// euclidean, sphere2, so3, se3 or chart:<name>; taken from the files when omitted.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long, value_enum, default_value_t = Metric::Based)]
    metric: Metric,
    /// Resample every curve to N subintervals on reading.
    #[arg(long)]
    samples: Option<usize>,
    /// Reference point for manifold curves, comma separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    star: Option<String>,
    /// Alignment slopes, e.g. 1/3,1/2,2/3,1,3/2,2,3.
    #[arg(long)]
    slopes: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Distance { a, b, common } => commands::distance(&a, &b, &common),
        Command::Matrix { dir, common, out } => commands::matrix(&dir, &common, out.as_deref()),
        Command::Geodesic { a, b, common, steps, out } => commands::geodesic(&a, &b, &common, steps, &out),
        Command::Align { a, b, common, out } => commands::align(&a, &b, &common, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            for line in &failure.messages {
                eprintln!("error: {line}");
            }
            ExitCode::from(failure.code)
        }
    }
}
