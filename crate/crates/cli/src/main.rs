mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entorder::EntropyOrder;

#[derive(Parser)]
#[command(name = "entorder", version, about = "Entanglement order of bipartite pure states")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Schmidt decomposition and measures of a state read from JSON.
    Schmidt {
        #[arg(long, value_name = "FILE")]
        state: PathBuf,
    },
    /// Measures of a bare Schmidt vector.
    Measures {
        #[arg(long, value_parser = parse_list)]
        lambda: Floats,
        /// Also report the Rényi entropy of this order.
        #[arg(long)]
        alpha: Option<EntropyOrder>,
    },
    /// Deterministic convertibility and optimal conversion probability.
    Convert {
        #[arg(long, value_parser = parse_list)]
        from: Floats,
        #[arg(long, value_parser = parse_list)]
        to: Floats,
    },
    /// Causal class of every point of the N = 3 Schmidt simplex.
    ClassifyGrid(GridArgs),
    /// Conversion probability from the reference to every simplex point.
    ProbGrid(GridArgs),
    /// Rényi entropy over the faces of the two-qubit amplitude tetrahedron.
    SurfaceGrid {
        #[arg(long, default_value = "1")]
        alpha: EntropyOrder,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(2..))]
        resolution: u32,
    },
    /// Haar-random statistics.
    Sample {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Largest N for the incomparability estimates.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(2..=10))]
        max_n: u32,
    },
    /// Polytope of spectra reachable by random fields.
    Polytope {
        #[arg(long, value_parser = parse_list, required_unless_present = "arch", conflicts_with = "arch")]
        lambda: Option<Floats>,
        /// Point on the arch line of N = 4 spectra, in [0, 1].
        #[arg(long)]
        arch: Option<f64>,
        #[arg(long)]
        vertices_only: bool,
    },
    /// Spectrum trajectory under random-field channels.
    Evolve {
        #[arg(long, value_parser = parse_list)]
        lambda: Floats,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Unitaries per channel.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        terms: u32,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long = "ref", value_parser = parse_list)]
    reference: Floats,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(2..))]
    resolution: u32,
}

/// Comma-separated list of numbers.
#[derive(Clone, Debug)]
struct Floats(Vec<f64>);

fn parse_list(s: &str) -> Result<Floats, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect::<Result<_, _>>()
        .map(Floats)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command).and_then(|text| commands::emit(cli.out.as_deref(), &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.tag(), e);
            ExitCode::from(1)
        }
    }
}
