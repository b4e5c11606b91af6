mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{CliError, Report};

#[derive(Parser, Debug)]
#[command(name = "ceinv", version, about = "Order-one invariant calculus of surface immersions: verification runs")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct WindowArg {
    /// Degree window M >= 1.
    #[arg(long, default_value_t = 1)]
    pub window: i64,
}

#[derive(Args, Debug, Clone)]
pub struct TrialArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Numerator/denominator bound for random rationals.
    #[arg(long, default_value_t = 20)]
    pub bound: i64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quotient of the free group on in-window symbols by the raw relations.
    UniversalGroup {
        #[command(flatten)]
        window: WindowArg,
        /// Use the relation matrix in this JSON file instead.
        #[arg(long)]
        relations: Option<PathBuf>,
        /// Also write the raw relation matrix as JSON.
        #[arg(long)]
        export_relations: Option<PathBuf>,
    },
    /// Raw and simplified relation lists span the same lattice.
    SpansEqual {
        #[command(flatten)]
        window: WindowArg,
        /// Drop this family from the raw list before comparing.
        #[arg(long)]
        without: Option<String>,
    },
    /// Closed formulas against the quotient computation.
    CrosscheckGu {
        #[command(flatten)]
        window: WindowArg,
    },
    /// One table per homomorphism from the universal group to G.
    Delta1Tables {
        #[command(flatten)]
        window: WindowArg,
        /// Target group, e.g. "2" or "0,2".
        #[arg(long)]
        group: String,
        /// Leave the tables themselves out of the report.
        #[arg(long)]
        summary_only: bool,
    },
    /// Quintuple-point relation from random plane quintuples.
    QqVerify {
        #[command(flatten)]
        trials: TrialArgs,
        /// Check a single quintuple from a JSON file instead.
        #[arg(long)]
        quintuple: Option<PathBuf>,
    },
    /// Census of arrow diagrams over random quintuples.
    DiagramClasses {
        #[command(flatten)]
        trials: TrialArgs,
    },
    /// The origin lies inside the simplex of four balanced planes.
    Lemma1Verify {
        #[command(flatten)]
        trials: TrialArgs,
    },
    /// The all-Q indicator satisfies the order-n relations.
    SectionE {
        #[command(flatten)]
        window: WindowArg,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// "full" or "sample:N".
        #[arg(long, default_value = "full")]
        contexts: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::UniversalGroup { window, relations, export_relations } => {
            commands::universal_group(window.window, relations.as_deref(), export_relations.as_deref())
        }
        Command::SpansEqual { window, without } => commands::spans_equal(window.window, without.as_deref()),
        Command::CrosscheckGu { window } => commands::crosscheck_gu(window.window),
        Command::Delta1Tables { window, group, summary_only } => {
            commands::delta1_tables(window.window, group, *summary_only)
        }
        Command::QqVerify { trials, quintuple } => match quintuple {
            Some(path) => commands::qq_verify_file(path),
            None => commands::qq_verify(trials),
        },
        Command::DiagramClasses { trials } => commands::diagram_classes(trials),
        Command::Lemma1Verify { trials } => commands::lemma1_verify(trials),
        Command::SectionE { window, n, contexts, seed } => commands::section_e(window.window, *n, contexts, *seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli).and_then(|r| r.emit(cli.out.as_deref()).map(|_| r)) {
        Ok(report) => {
            eprintln!("{}: {}", report.command, if report.verdict { "PASS" } else { "FAIL" });
            ExitCode::from(if report.verdict { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
