use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::{CliError, Output};

#[derive(Debug, Parser)]
#[command(
    name = "cyclic-ca",
    version,
    about = "Exact computation in the semigroups of cellular automata over Z_n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Emit CSV (rank and table).
    #[arg(long, global = true)]
    csv: bool,

    /// Maximum number of elements a closure or search may hold.
    #[arg(long, global = true, value_name = "N", default_value_t = cyclic_ca::DEFAULT_CLOSURE_CAP)]
    cap: usize,

    /// Seed for randomized commands.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    seed: u64,

    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct Shape {
    /// Group order n.
    #[arg(short = 'n', long = "n")]
    n: usize,

    /// Alphabet size q.
    #[arg(short = 'q', long = "q")]
    q: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the shift orbits of A^n.
    Orbits(Shape),

    /// Rank bounds for CA(Z_n; A).
    Rank {
        #[arg(short = 'n', long = "n")]
        n: u64,
        #[arg(short = 'q', long = "q")]
        q: u64,
    },

    /// Rank bounds for ranges of n and q, one CSV row each.
    Table {
        /// Range of n, e.g. `2..8` (inclusive) or `6`.
        #[arg(long = "n", value_parser = commands::parse_range)]
        n: (u64, u64),
        /// Range of q.
        #[arg(long = "q", value_parser = commands::parse_range)]
        q: (u64, u64),
    },

    /// The standard generating set of CA(Z_n; A).
    Gens {
        #[command(flatten)]
        shape: Shape,
        /// Only the generators of the group of units.
        #[arg(long)]
        units_only: bool,
    },

    /// Check whether a generator file generates CA(Z_n; A).
    Verify {
        #[command(flatten)]
        shape: Shape,
        /// Generator file (tables or cycle/arrow notation).
        file: PathBuf,
        /// Overrides --cap for this closure.
        #[arg(long, value_name = "N")]
        closure_cap: Option<usize>,
    },

    /// Shortest word for a target automaton over a generating set.
    Decompose {
        #[command(flatten)]
        shape: Shape,
        /// CA table file of the target.
        #[arg(long)]
        target: PathBuf,
        /// `std` for the standard generating set, or a generator file.
        #[arg(long, default_value = "std")]
        gens: String,
    },

    /// Closure summary of a generating set.
    Closure {
        #[command(flatten)]
        shape: Shape,
        /// `std` for the standard generating set, or a generator file.
        #[arg(long, default_value = "std", conflicts_with = "random")]
        gens: String,
        /// Use k random automata (from --seed) instead.
        #[arg(long, value_name = "K")]
        random: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let g = &cli.global;
    if let Some(threads) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    let output = if g.json {
        Output::Json
    } else if g.csv {
        Output::Csv
    } else {
        Output::Text
    };
    match cli.command {
        Command::Orbits(s) => commands::orbits(s.n, s.q, output),
        Command::Rank { n, q } => commands::rank(n, q, output),
        Command::Table { n, q } => commands::table(n, q, output),
        Command::Gens { shape, units_only } => commands::gens(shape.n, shape.q, units_only, output),
        Command::Verify {
            shape,
            file,
            closure_cap,
        } => commands::verify(
            shape.n,
            shape.q,
            &file,
            closure_cap.unwrap_or(g.cap),
            output,
        ),
        Command::Decompose {
            shape,
            target,
            gens,
        } => commands::decompose(shape.n, shape.q, &target, &gens, g.cap, output),
        Command::Closure {
            shape,
            gens,
            random,
        } => commands::closure(shape.n, shape.q, &gens, random, g.seed, g.cap),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
