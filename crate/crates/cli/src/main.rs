//! Command-line front end: sample sets, analyze them, run bound checks and
//! render reports.

mod analyze;
mod config;
mod error;
mod generate;
mod ledger;
mod output;
mod plot;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lacunary::diagnostics::Verdict;
use lacunary::seq::SetRecord;

use crate::config::SetupArgs;
use crate::error::{CliError, CliResult};
use crate::output::OutDir;
use crate::verify::VerifyArgs;

/// Random thin sets of integers: sampling, analysis and Monte Carlo bound checks.
///
/// Exit codes: 0 success, 1 violated bound, 2 usage or input error, 3 integer
/// overflow, 4 partial results (a budget was exceeded).
#[derive(Debug, Parser)]
#[command(name = "lacunary", version)]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "LACUNARY_OUT", default_value = "lacunary-out")]
    out: PathBuf,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a set; writes set.json, blocks.csv, summary.csv and config.toml.
    Generate(SetupArgs),
    /// Audit a stored set: blocks, mesh fit, Weyl and Λ(q) profiles, ψ per block.
    Analyze {
        /// Set file written by `generate`.
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value_t = 8)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Block schedule: n_pow_n, exp_loglog_sq, n_pow_beta_n or dyadic.
        #[arg(long)]
        blocks: Option<String>,
        #[arg(long)]
        beta: Option<f64>,
        /// Take the block schedule from this run configuration.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run a bound check (lemma1_3, lemma2_1, lemma2_3, lemma2_9, lemma3_2,
    /// lemma3_3, weyl, zalcwasser, mesh, lambda_q, or all) and append to the ledger.
    Verify {
        #[command(flatten)]
        args: VerifyArgs,
        /// Ledger file; defaults to ledger.csv in the output directory.
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Render a ledger to SVG charts and index.html.
    Report {
        #[arg(long)]
        ledger: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {t} threads: {e}")))?;
    }
    match cli.command {
        Command::Generate(setup) => {
            let cfg = setup.resolve()?;
            let out = OutDir::create(cfg.out_dir.as_deref().unwrap_or(&cli.out))?;
            for f in generate::run(&cfg, &out)? {
                println!("wrote {f}");
            }
            Ok(())
        }
        Command::Analyze { set, trials, seed, blocks, beta, config } => {
            let text = std::fs::read_to_string(&set).map_err(CliError::io(&set))?;
            let record = SetRecord::from_json(&text)?;
            let out = OutDir::create(&cli.out)?;
            let blocks = match (blocks, config) {
                (Some(b), _) => config::parse_blocks(&b, beta)?,
                (None, Some(path)) => config::RunConfig::load(&path)?.blocks,
                (None, None) => lacunary::seq::BlockSchedule::NPowN,
            };
            let outcome = analyze::run(&record, &blocks, trials, seed, &out)?;
            for f in &outcome.files {
                println!("wrote {f}");
            }
            if outcome.skipped.is_empty() {
                Ok(())
            } else {
                Err(CliError::Partial(outcome.skipped.join("; ")))
            }
        }
        Command::Verify { args, ledger } => {
            let rows = verify::run(&args)?;
            let path = ledger.unwrap_or_else(|| cli.out.join("ledger.csv"));
            ledger::append(&path, &rows)?;
            for r in &rows {
                println!("{:<18} {:<12} empirical={} analytic={} stderr={}", r.bound_id, r.verdict, r.empirical, r.analytic, r.stderr);
            }
            let violated = rows.iter().filter(|r| r.verdict == Verdict::Violated).count();
            if violated > 0 {
                Err(CliError::Violated(violated))
            } else {
                Ok(())
            }
        }
        Command::Report { ledger } => {
            let out = OutDir::create(&cli.out)?;
            let outcome = report::run(&ledger, &out)?;
            for (line, err) in &outcome.skipped_rows {
                eprintln!("warning: skipped ledger line {line}: {err}");
            }
            for p in &outcome.plots {
                println!("wrote {p}");
            }
            Ok(())
        }
    }
}
