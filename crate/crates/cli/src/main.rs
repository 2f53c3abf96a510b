mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::report::{Outcome, Report, Status};

/// Exact algebra checks for contraction algebras and flops.
#[derive(Parser, Debug)]
#[command(name = "flopcheck", version, about)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Starting degree cap for noncommutative completion (overrides FLOPCHECK_DEGREE_CAP).
    #[arg(long, global = true)]
    cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Noncommutative presentations.
    #[command(subcommand)]
    Nc(NcCommand),
    /// Decide whether two local algebras are isomorphic.
    Isotest { a: PathBuf, b: PathBuf },
    /// Gopakumar-Vafa tuples from an algebra presentation.
    Gv {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        length: usize,
    },
    /// Commutative polynomial computations.
    #[command(subcommand)]
    Comm(CommCommand),
    /// Matrix factorizations and quiver relations.
    #[command(subcommand)]
    Matfac(MatfacCommand),
    /// Bundled regression data.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Subcommand, Debug)]
enum NcCommand {
    /// Certified dimension of the quotient.
    Dim { file: PathBuf },
    /// Normal-word basis of the quotient.
    Basis { file: PathBuf },
    /// Normal form of an expression.
    Nf {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Presentation with all commutators added, and its dimension.
    Abelianize { file: PathBuf },
}

#[derive(Args, Debug)]
struct PolyOrder {
    #[arg(long)]
    poly: PathBuf,
    #[arg(long, default_value = "ds")]
    order: String,
}

#[derive(Subcommand, Debug)]
enum CommCommand {
    /// Milnor number of a polynomial file.
    Milnor(PolyOrder),
    /// Tjurina number of a polynomial file.
    Tjurina(PolyOrder),
    /// Smoothness of a chart hypersurface.
    Smooth {
        #[arg(long)]
        chart: PathBuf,
        /// Give up after this many S-pair reductions.
        #[arg(long)]
        max_pairs: Option<usize>,
    },
    /// Ideal membership.
    Member {
        /// Comma-separated variable names.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        /// Ideal generator (repeatable).
        #[arg(long = "ideal", required = true, allow_hyphen_values = true)]
        ideal: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Pull the base equation back along a chart map.
    Subst {
        #[arg(long)]
        chart: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum MatfacCommand {
    /// Check that phi * psi = psi * phi = f * I.
    Check { file: PathBuf },
    /// Evaluate an arrow expression and test it against the column space of psi.
    Relation {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCommand {
    /// Run every bundled regression check.
    Verify,
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let policy = match commands::cap_policy(cli.cap) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let result: anyhow::Result<Outcome> = match &cli.command {
        Command::Nc(NcCommand::Dim { file }) => commands::nc_dim(file, &policy),
        Command::Nc(NcCommand::Basis { file }) => commands::nc_basis(file, &policy),
        Command::Nc(NcCommand::Nf { file, expr }) => commands::nc_nf(file, expr, &policy),
        Command::Nc(NcCommand::Abelianize { file }) => commands::nc_abelianize(file, &policy),
        Command::Isotest { a, b } => commands::isotest(a, b, &policy),
        Command::Gv { file, length } => commands::gv(file, *length, &policy),
        Command::Comm(CommCommand::Milnor(p)) => commands::comm_number(&p.poly, &p.order, true),
        Command::Comm(CommCommand::Tjurina(p)) => commands::comm_number(&p.poly, &p.order, false),
        Command::Comm(CommCommand::Smooth { chart, max_pairs }) => commands::comm_smooth(chart, *max_pairs),
        Command::Comm(CommCommand::Member { vars, ideal, element }) => commands::comm_member(vars, ideal, element),
        Command::Comm(CommCommand::Subst { chart }) => commands::comm_subst(chart),
        Command::Matfac(MatfacCommand::Check { file }) => commands::matfac_check(file),
        Command::Matfac(MatfacCommand::Relation { file, expr }) => commands::matfac_relation(file, expr),
        Command::Corpus(CorpusCommand::Verify) => Ok(commands::corpus_verify(&policy)),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(report::error_code(&e));
        }
    };
    let code = outcome.status.exit_code();
    let report = Report {
        command: command_echo(),
        inputs_digest: outcome.digest.clone(),
        result: outcome.result.clone(),
        certificate: outcome.certificate.clone(),
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if cli.json {
        match serde_json::to_string_pretty(&report) {
            Ok(s) => println!("{s}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    } else {
        print!("{}", outcome.human);
        if outcome.status == Status::Inconclusive {
            eprintln!("inconclusive");
        }
    }
    ExitCode::from(code)
}
