//! `appell`: tabulate, evaluate and verify Appell-type polynomial families.

mod commands;

use appell_core::stochastic::McFamily;
use appell_core::{parse_rational, FamilyKind, Rational};
use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "appell", version, about = "Exact Bernoulli/Euler/Appell polynomial toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
pub struct Orders {
    /// Bind the first order `m` (rational, `p/q` or `p`).
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub m: Option<Rational>,
    /// Bind the second order `l` of the mixed family.
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    pub l: Option<Rational>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print member n, or members 0..=max-n.
    Family {
        #[arg(value_parser = family_kind)]
        kind: FamilyKind,
        #[arg(long, conflicts_with = "max_n", required_unless_present = "max_n")]
        n: Option<usize>,
        #[arg(long)]
        max_n: Option<usize>,
        #[command(flatten)]
        orders: Orders,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate member n at x (every order must be bound).
    Eval {
        #[arg(value_parser = family_kind)]
        kind: FamilyKind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        x: Rational,
        #[command(flatten)]
        orders: Orders,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run one identity, or all of them, for n = 0..=max-n.
    Verify {
        #[arg(long, default_value = "all")]
        identity: String,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Monte-Carlo check of the expectation reduction at integer orders.
    Mc {
        #[arg(value_enum)]
        family: McKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        l: u32,
        #[arg(long, value_parser = rational, allow_hyphen_values = true, default_value = "0")]
        x: Rational,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Coefficients of x^0..x^n for n = 0..=max-n.
    Table {
        #[arg(value_parser = family_kind)]
        kind: FamilyKind,
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        orders: Orders,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum McKind {
    Bernoulli,
    Euler,
}

impl From<McKind> for McFamily {
    fn from(k: McKind) -> Self {
        match k {
            McKind::Bernoulli => McFamily::Bernoulli,
            McKind::Euler => McFamily::Euler,
        }
    }
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn family_kind(s: &str) -> Result<FamilyKind, String> {
    s.parse().map_err(|e: appell_core::AppellError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Family { kind, n, max_n, orders, format } => {
            let range = match (n, max_n) {
                (Some(n), _) => n..=n,
                (None, Some(max)) => 0..=max,
                (None, None) => unreachable!("clap requires one of them"),
            };
            commands::family(kind, range, n.is_some(), &orders, format)
        }
        Command::Eval { kind, n, x, orders, format } => commands::eval(kind, n, &x, &orders, format),
        Command::Verify { identity, max_n, format } => commands::verify(&identity, max_n, format),
        Command::Mc { family, n, m, l, x, samples, seed, format } => {
            let cfg = appell_core::stochastic::McConfig { samples, seed, n, m_int: m, shift_count: l, x0: x };
            commands::mc(family.into(), cfg, format)
        }
        Command::Table { kind, max_n, orders, format } => commands::table(kind, max_n, &orders, format),
    };
    match outcome {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Failure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
