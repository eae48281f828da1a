//! `msskit`: enumerate, test, compose, factor, count and locate MSS-sequences.

mod output;
mod selftest;

use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use msskit::{Error, Sequence};

use output::Printer;

#[derive(Parser)]
#[command(name = "msskit", version, about = "Symbolic dynamics of MSS-sequences of unimodal maps")]
struct Cli {
    /// Print sequences in full (`--expand=false` prints run-length form such as RL^2RC)
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set)]
    expand: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Structured,
    Bruteforce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CountKind {
    Single,
    Repeated,
    Sblocks,
}

fn parse_seq(s: &str) -> Result<Sequence, String> {
    s.parse::<Sequence>().map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// List every MSS-sequence of one period in increasing order
    Enumerate {
        #[arg(long)]
        period: usize,
        #[arg(long, value_enum, default_value_t = Method::Structured)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Block-form MSS test with the failing shift and rule
    Check {
        #[arg(value_parser = parse_seq)]
        sequence: Sequence,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The *-composition A * B
    Compose {
        #[arg(value_parser = parse_seq)]
        a: Sequence,
        #[arg(value_parser = parse_seq)]
        b: Sequence,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Factor an MSS-sequence once, or down to primary leaves with --tree
    Factor {
        #[arg(value_parser = parse_seq)]
        sequence: Sequence,
        #[arg(long)]
        tree: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Closed-form counts, optionally checked against enumeration
    Count {
        #[arg(long)]
        period: Option<usize>,
        #[arg(long, value_enum, default_value_t = CountKind::Single)]
        kind: CountKind,
        /// Block length for --kind sblocks
        #[arg(long)]
        m: Option<usize>,
        /// Maximum run of consecutive Ls for --kind sblocks
        #[arg(long)]
        qcap: Option<usize>,
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Superstable logistic parameter of a sequence
    Locate {
        #[arg(value_parser = parse_seq)]
        sequence: Sequence,
        #[arg(long, default_value_t = msskit::locator::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check that parameter order matches sequence order up to a period
    VerifyOrder {
        #[arg(long)]
        pmax: usize,
        #[arg(long, default_value_t = msskit::locator::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the built-in cross-check suites
    Selftest {
        #[arg(long, default_value_t = 14)]
        pmax: usize,
        #[arg(long, value_enum)]
        suite: Option<selftest::Suite>,
    },
}

/// Failure with the exit code it maps to.
pub enum Failure {
    /// Bad input or flags: exit 2.
    Usage(String),
    /// A well-formed request the domain rejects: exit 1.
    Domain(Error),
    /// A check ran and reported failure; its output is already printed.
    Checked,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::NotAdmissible(_) => "not_admissible",
        Error::PositionOutOfRange { .. } => "position_out_of_range",
        Error::ShiftOutOfRange { .. } => "shift_out_of_range",
        Error::Lemma1Violation { .. } => "l_run_too_long",
        Error::NotMss(_) => "not_mss",
        Error::CapViolation { .. } => "cap_violation",
        Error::ShapeMismatch(_) => "shape_mismatch",
        Error::NotFound { .. } => "not_found",
        Error::InvalidArgument(_) => "invalid_argument",
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("MSSKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("MSSKIT_THREADS={v:?} is not a non-negative integer")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let out = Printer::new(cli.expand);
    match cli.command {
        Command::Enumerate {
            period,
            method,
            format,
        } => out.enumerate(period, method == Method::Structured, format),
        Command::Check { sequence, format } => out.check(&sequence, format),
        Command::Compose { a, b, format } => out.compose(&a, &b, format),
        Command::Factor {
            sequence,
            tree,
            format,
        } => out.factor(&sequence, tree, format),
        Command::Count {
            period,
            kind,
            m,
            qcap,
            verify,
            format,
        } => out.count(period, kind, m, qcap, verify, format),
        Command::Locate {
            sequence,
            tol,
            format,
        } => out.locate(&sequence, tol, format),
        Command::VerifyOrder { pmax, tol, format } => out.verify_order(pmax, tol, format),
        Command::Selftest { pmax, suite } => selftest::run(pmax, suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checked) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            let line = serde_json::json!({ "error": error_kind(&e), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::from(1)
        }
    }
}
