//! The `nextify` command line: validate orders, encode and sort JSON Lines
//! datasets, benchmark the sorter and run the self-test.
//!
//! Exit codes: 0 success, 1 user error (bad input, failed check), 2 internal
//! invariant failure.

pub mod bench;
mod commands;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use nextify::dataset::DatasetError;
use nextify::tsodl::ParseError;
use nextify::EncodeError;
use thiserror::Error;

pub use bench::{parse_sizes, BenchConfig, BenchRow, Generator};

#[derive(Debug, Parser)]
#[command(name = "nextify", version, about = "Order-preserving byte keys for tree structured orders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an order file and print its statistics.
    Validate { order: PathBuf },
    /// Print one key per dataset record.
    Encode {
        order: PathBuf,
        /// JSON Lines file, `-` for standard input.
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Padded)]
        mode: ModeArg,
        /// Uppercase hex, one key per line, instead of length-prefixed binary.
        #[arg(long)]
        hex: bool,
        /// Report bad records on standard error and continue.
        #[arg(long)]
        skip_bad: bool,
        #[arg(long, value_enum, default_value_t = NanArg::Reject)]
        nan: NanArg,
    },
    /// Print the dataset in ascending order.
    Sort {
        order: PathBuf,
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputArg::Lines)]
        output: OutputArg,
        #[arg(long)]
        skip_bad: bool,
        #[arg(long, value_enum, default_value_t = NanArg::Reject)]
        nan: NanArg,
        /// Sort top-level buckets on several threads.
        #[arg(long)]
        parallel: bool,
    },
    /// Time encoding, radix sort and comparison sort; CSV on standard output.
    Bench {
        /// Order for `--gen custom`.
        order: Option<PathBuf>,
        /// Sizes: comma-separated numbers, `2^k`, or doubling ranges such as
        /// `2^10..2^22`.
        #[arg(long, default_value = "2^10..2^20")]
        n: String,
        /// Data generator; `custom` (random elements of ORDER) when an order
        /// is given, `uniform` otherwise.
        #[arg(long = "gen", value_enum)]
        generator: Option<Generator>,
        #[arg(long, default_value_t = 3)]
        repeat: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the built-in consistency checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Golden table file replacing the built-in one.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Random trees for the comparator agreement check (ten pairs each).
        #[arg(long, default_value_t = 2000)]
        trees: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Padded,
    Packed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NanArg {
    Reject,
    High,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Lines,
    Indices,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}:{source}", path.display())]
    Order {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("line {line}: {source}")]
    Encode {
        line: usize,
        #[source]
        source: EncodeError,
    },
    #[error("{0}")]
    Encoder(#[source] EncodeError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    CheckFailed(String),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

fn is_internal(err: &EncodeError) -> bool {
    matches!(
        err,
        EncodeError::CounterUnderflow
            | EncodeError::CounterOverflow
            | EncodeError::DepthOverflow(_)
            | EncodeError::PrefixAnomaly
            | EncodeError::Internal(_)
    )
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 2,
            CliError::Encode { source, .. } | CliError::Encoder(source) if is_internal(source) => 2,
            _ => 1,
        }
    }
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = if informational {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return if informational { 0 } else { 1 };
        }
    };
    let result = match cli.command {
        Command::Validate { order } => commands::validate(&order, out),
        Command::Encode {
            order,
            data,
            mode,
            hex,
            skip_bad,
            nan,
        } => commands::encode(
            &commands::Inputs {
                order,
                data,
                skip_bad,
                nan: nan.into(),
            },
            mode.into(),
            hex,
            out,
            err,
        ),
        Command::Sort {
            order,
            data,
            output,
            skip_bad,
            nan,
            parallel,
        } => commands::sort(
            &commands::Inputs {
                order,
                data,
                skip_bad,
                nan: nan.into(),
            },
            output == OutputArg::Indices,
            parallel,
            out,
            err,
        ),
        Command::Bench {
            order,
            n,
            generator,
            repeat,
            seed,
        } => commands::bench(order.as_deref(), &n, generator, repeat, seed, out),
        Command::Selftest { seed, golden, trees } => commands::selftest(seed, golden.as_deref(), trees, out),
    };
    let result = result.and_then(|()| out.flush().map_err(CliError::from));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

impl From<ModeArg> for nextify::Mode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Padded => nextify::Mode::Padded,
            ModeArg::Packed => nextify::Mode::Packed,
        }
    }
}

impl From<NanArg> for nextify::NanPolicy {
    fn from(nan: NanArg) -> Self {
        match nan {
            NanArg::Reject => nextify::NanPolicy::Reject,
            NanArg::High => nextify::NanPolicy::High,
        }
    }
}
