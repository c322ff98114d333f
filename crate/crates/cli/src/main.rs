use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use motzkin_cli::{self as cmd, CliError, Curve, Format, SizeList};
use motzkin_core::stickel::DEFAULT_EXPONENT_BOUND;
use motzkin_core::FieldSpec;

/// Exact computations in the Motzkin monoid Mo_n.
#[derive(Parser)]
#[command(name = "motzkin", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Run requests that exceed the size guards.
    #[arg(long, global = true)]
    force: bool,
    /// Worker threads (default: all cores).
    #[arg(long, env = "MOTZKIN_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monoid size and cell sizes.
    Count {
        n: usize,
        /// Also enumerate the monoid and compare.
        #[arg(long)]
        enumerate: bool,
    },
    /// Grid of every J-cell with idempotents marked.
    Cells { n: usize },
    /// Gram matrix of the J-cell with k through strands, and its rank.
    Gram {
        n: usize,
        k: usize,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        /// Emit only the matrix, in the `rows cols` text format.
        #[arg(long)]
        matrix: bool,
    },
    /// Cell-module sizes and simple dimensions for all n up to n_max.
    Table {
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_value = "Q,GF2")]
        fields: Vec<FieldSpec>,
    },
    /// Data series for the growth curves.
    Curve {
        #[arg(value_enum)]
        which: Curve,
        /// `a..b`, `a..=b`, `a..=b:step`, or a comma-separated list.
        #[arg(long, default_value = "100,200,500,1000,2000,5000")]
        n: SizeList,
    },
    /// Null, left and right connectedness by brute force.
    Connected { n: usize },
    /// Run the toy key exchange.
    Stickel {
        #[arg(default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_EXPONENT_BOUND)]
        exponent_bound: u32,
    },
    /// Consecutive-through-strand block of a Gram matrix.
    Submatrix {
        n: usize,
        k: usize,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
    },
    /// Rank of a matrix file in `rows cols` text format (`-` for stdin).
    Rank {
        path: PathBuf,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let (format, force) = (cli.format, cli.force);
    let text = match cli.command {
        Command::Count { n, enumerate } => cmd::count(n, enumerate, force, format),
        Command::Cells { n } => cmd::cells(n, force, format),
        Command::Gram { n, k, field, matrix } => cmd::gram(n, k, field, matrix, force, format),
        Command::Table { n_max, fields } => cmd::table(n_max, &fields, force, format),
        Command::Curve { which, n } => cmd::curve(which, &n.0, format),
        Command::Connected { n } => cmd::connected(n, force, format),
        Command::Stickel {
            n,
            seed,
            trials,
            exponent_bound,
        } => cmd::stickel(n, seed, trials, exponent_bound, format),
        Command::Submatrix { n, k, field } => cmd::submatrix(n, k, field, format),
        Command::Rank { path, field } => {
            let mut input = String::new();
            if path.as_os_str() == "-" {
                std::io::stdin().read_to_string(&mut input)?;
            } else {
                input = std::fs::read_to_string(&path)?;
            }
            cmd::rank_text(&input, field, force)
        }
    }?;
    match cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("motzkin: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
