use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nccum::convolve::{
    bp_inverse, bp_map, bp_map_shuffle, convolve_laws, join_independent, law_power,
};
use nccum::cumulants::{cumulant_to_cumulant, cumulants_to_moments, moments_to_cumulants};
use nccum::laws::{read_cumulants, read_law, write_cumulants, write_law};
use nccum::partitions::{enumerate_with_limit, mobius_to_top, nesting_stats, DEFAULT_MAX_N};
use nccum::scalar::parse_rational;
use nccum::{CumulantFamily, Law, PartitionFamily, Rational};

mod suites;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  verification failure (verify)
  2  usage error
  3  parse error in an input file
  4  dimension mismatch
  5  domain error
  6  size limit exceeded
  7  I/O error
  8  non-invertible value";

#[derive(Parser)]
#[command(name = "nccum", version, about = "Exact free, Boolean and monotone cumulants of infinitesimal laws")]
#[command(after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Free,
    Boolean,
    Monotone,
}

impl From<Family> for CumulantFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Free => CumulantFamily::Free,
            Family::Boolean => CumulantFamily::Boolean,
            Family::Monotone => CumulantFamily::Monotone,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Free,
    Boolean,
}

impl From<Kind> for CumulantFamily {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Free => CumulantFamily::Free,
            Kind::Boolean => CumulantFamily::Boolean,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Partitions {
    All,
    Noncrossing,
    Interval,
    IrreducibleNc,
}

impl From<Partitions> for PartitionFamily {
    fn from(p: Partitions) -> Self {
        match p {
            Partitions::All => PartitionFamily::All,
            Partitions::Noncrossing => PartitionFamily::NonCrossing,
            Partitions::Interval => PartitionFamily::Interval,
            Partitions::IrreducibleNc => PartitionFamily::IrreducibleNc,
        }
    }
}

#[derive(clap::Args)]
struct Io {
    /// Input file; `-` or absent reads stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file; absent writes stdout.
    #[arg(long = "out", value_name = "FILE")]
    output: Option<PathBuf>,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s)
}

#[derive(Subcommand)]
enum Command {
    /// Cumulant table of a law.
    Cumulants {
        #[arg(long, value_enum)]
        family: Family,
        #[command(flatten)]
        io: Io,
    },
    /// Law reconstructed from a cumulant table.
    Moments {
        #[command(flatten)]
        io: Io,
    },
    /// Converts a cumulant table to another family.
    Convert {
        #[arg(long, value_enum)]
        to: Family,
        #[command(flatten)]
        io: Io,
    },
    /// Additive free or Boolean convolution of two laws.
    Convolve {
        #[arg(long, value_enum)]
        kind: Kind,
        first: PathBuf,
        second: PathBuf,
        #[arg(long = "out", value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Free or Boolean convolution power.
    Power {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Exponent, as `p` or `p/q`.
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        s: Rational,
        /// Accept negative exponents.
        #[arg(long)]
        allow_negative: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Infinitesimal Bercovici–Pata map.
    Bp {
        /// Parameter t >= 0, as `p` or `p/q`.
        #[arg(long, value_parser = rational, default_value = "1", allow_hyphen_values = true)]
        t: Rational,
        /// Compute through the shuffle calculus instead of convolution powers.
        #[arg(long)]
        shuffle: bool,
        /// Apply the inverse of the t = 1 map.
        #[arg(long, conflicts_with_all = ["t", "shuffle"])]
        inverse: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Joint law of two independent univariate laws.
    Join {
        #[arg(long, value_enum)]
        kind: Kind,
        first: PathBuf,
        second: PathBuf,
        #[arg(long = "out", value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Lists the partitions of {1..n} in a family.
    Partitions {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "noncrossing")]
        family: Partitions,
        /// Append tree factorial, monotone count and Möbius value.
        #[arg(long)]
        stats: bool,
    },
    /// Runs a verification suite on seeded random laws.
    Verify {
        #[arg(long, value_parser = suites::parse_suite)]
        suite: suites::Suite,
        #[arg(long, default_value_t = 5)]
        order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random laws per property.
        #[arg(long, default_value_t = 4)]
        laws: usize,
    },
}

enum Failure {
    Lib(nccum::Error),
    Io(String),
    Verify,
}

impl From<nccum::Error> for Failure {
    fn from(e: nccum::Error) -> Self {
        Failure::Lib(e)
    }
}

fn io_error(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => fs::read_to_string(p).map_err(|e| io_error(p, e)),
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_error(p, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn load_law(path: &Path) -> Result<Law, Failure> {
    Ok(read_law(&read_input(Some(path))?)?)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Cumulants { family, io } => {
            let law = read_law(&read_input(io.input.as_deref())?)?;
            let table = moments_to_cumulants(&law, family.into())?;
            write_output(io.output.as_deref(), &write_cumulants(&table))
        }
        Command::Moments { io } => {
            let table = read_cumulants(&read_input(io.input.as_deref())?)?;
            write_output(io.output.as_deref(), &write_law(&cumulants_to_moments(&table)?))
        }
        Command::Convert { to, io } => {
            let table = read_cumulants(&read_input(io.input.as_deref())?)?;
            let out = cumulant_to_cumulant(&table, to.into())?;
            write_output(io.output.as_deref(), &write_cumulants(&out))
        }
        Command::Convolve { kind, first, second, output } => {
            let out = convolve_laws(&load_law(&first)?, &load_law(&second)?, kind.into())?;
            write_output(output.as_deref(), &write_law(&out))
        }
        Command::Power { kind, s, allow_negative, io } => {
            let law = read_law(&read_input(io.input.as_deref())?)?;
            let out = law_power(&law, &s, kind.into(), allow_negative)?;
            write_output(io.output.as_deref(), &write_law(&out))
        }
        Command::Bp { t, shuffle, inverse, io } => {
            let law = read_law(&read_input(io.input.as_deref())?)?;
            let out = if inverse {
                bp_inverse(&law)?
            } else if shuffle {
                bp_map_shuffle(&law, &t)?
            } else {
                bp_map(&law, &t)?
            };
            write_output(io.output.as_deref(), &write_law(&out))
        }
        Command::Join { kind, first, second, output } => {
            let out = join_independent(&load_law(&first)?, &load_law(&second)?, kind.into())?;
            write_output(output.as_deref(), &write_law(&out))
        }
        Command::Partitions { n, family, stats } => {
            let family: PartitionFamily = family.into();
            let mut out = String::new();
            for pi in enumerate_with_limit(n, family, DEFAULT_MAX_N)?.iter() {
                out.push_str(&pi.to_string());
                if stats && pi.is_noncrossing() {
                    let s = nesting_stats(pi)?;
                    out.push_str(&format!(
                        " blocks={} tree_factorial={} monotone={} mobius={}",
                        pi.block_count(),
                        s.tree_factorial,
                        s.monotone_count,
                        mobius_to_top(pi)?
                    ));
                } else if stats {
                    out.push_str(&format!(" blocks={}", pi.block_count()));
                }
                out.push('\n');
            }
            write_output(None, &out)
        }
        Command::Verify { suite, order, seed, laws } => {
            let report = suites::run(suite, order, seed, laws)?;
            write_output(None, &report.render())?;
            if report.failed() > 0 {
                Err(Failure::Verify)
            } else {
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("error[io]: {msg}");
            ExitCode::from(7)
        }
        Err(Failure::Lib(e)) => {
            let (code, kind) = match &e {
                nccum::Error::Parse { .. } => (3, "parse"),
                nccum::Error::Dimension(_) => (4, "dimension"),
                nccum::Error::Domain(_) => (5, "domain"),
                nccum::Error::SizeLimit { .. } => (6, "size"),
                nccum::Error::NonInvertible(_) => (8, "non-invertible"),
            };
            eprintln!("error[{kind}]: {e}");
            ExitCode::from(code)
        }
    }
}
