//! Command-line front end: symbol analysis, expansion runs, verification
//! suites, and raw convolution, with JSON on stdout and single-line JSON
//! diagnostics on stderr.
//!
//! Exit codes: 0 success, 1 usage/internal/IO error, 2 assumption
//! violation (non-normalized symbol, dispersive point, or modulus one on
//! the whole circle), 3 verification-suite failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use convpow::engine::{default_n_list, fit_slope, ExpansionPlan};
use convpow::error::{Error, Result};
use convpow::report::{
    diagnostic_json, to_json_pretty, ExpandSummaryJson, SlopesJson, SymbolReportJson,
};
use convpow::sequence::Sequence;
use convpow::{analyze, catalog, run_suite, suite_names};

#[derive(Parser)]
#[command(
    name = "convpow",
    version,
    about = "Convolution powers of sequences on the integers: symbol analysis, \
             local limit expansions, and remainder diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate and classify the tangency points of a sequence's symbol.
    Analyze {
        #[command(flatten)]
        input: SchemeArgs,
        /// Expansion order M (number of correction terms).
        #[arg(short = 'M', long = "order", default_value_t = 3)]
        order: usize,
    },
    /// Compute a convolution power, its expansion, and the remainder.
    Expand {
        #[command(flatten)]
        input: SchemeArgs,
        /// Expansion order M (number of correction terms).
        #[arg(short = 'M', long = "order", default_value_t = 3)]
        order: usize,
        /// Convolution power to expand.
        #[arg(short = 'n', long = "power", default_value_t = 1000,
              value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Prefix for CSV outputs (writes <prefix>_profile.csv and, with
        /// --slopes, <prefix>_slopes.csv).
        #[arg(long)]
        out: Option<String>,
        /// Also measure remainder norms over a log-spaced list of powers
        /// up to n and fit their decay slopes.
        #[arg(long)]
        slopes: bool,
        /// Envelope prefactor C.
        #[arg(long = "envelope-c", default_value_t = 0.09)]
        envelope_c: f64,
        /// Envelope decay rate c.
        #[arg(long = "envelope-rate", default_value_t = 0.225)]
        envelope_rate: f64,
    },
    /// Run a named verification suite and print its verdict.
    Verify {
        /// Suite name, or "all".
        #[arg(long)]
        suite: String,
    },
    /// Convolve two sequence files, or raise one to a power.
    Convolve {
        /// Sequence JSON file; pass twice to convolve two sequences.
        #[arg(long = "file", required = true)]
        files: Vec<PathBuf>,
        /// Convolution power applied to a single file.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        power: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeKind {
    O3,
    Bernoulli,
    SymmetricWalk,
    LaxFriedrichs,
    File,
}

#[derive(Args)]
struct SchemeArgs {
    /// Which sequence to analyze.
    #[arg(long, value_enum)]
    scheme: SchemeKind,
    /// Courant number for o3 and lax-friedrichs.
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Success probability for bernoulli.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Sequence JSON file for --scheme file.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl SchemeArgs {
    fn sequence(&self) -> Result<Sequence> {
        match self.scheme {
            SchemeKind::O3 => catalog::o3(self.lambda),
            SchemeKind::Bernoulli => catalog::bernoulli(self.p),
            SchemeKind::SymmetricWalk => Ok(catalog::symmetric_walk()),
            SchemeKind::LaxFriedrichs => catalog::lax_friedrichs(self.lambda),
            SchemeKind::File => {
                let path = self
                    .file
                    .as_ref()
                    .ok_or_else(|| Error::Parse("--scheme file requires --file <path>".into()))?;
                catalog::from_file(path)
            }
        }
    }

    fn describe(&self) -> String {
        match self.scheme {
            SchemeKind::O3 => format!("o3(lambda={})", self.lambda),
            SchemeKind::Bernoulli => format!("bernoulli(p={})", self.p),
            SchemeKind::SymmetricWalk => "symmetric-walk".into(),
            SchemeKind::LaxFriedrichs => format!("lax-friedrichs(lambda={})", self.lambda),
            SchemeKind::File => format!(
                "file:{}",
                self.file
                    .as_deref()
                    .unwrap_or(std::path::Path::new("?"))
                    .display()
            ),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let diag = serde_json::json!({
                "error": "USAGE",
                "message": e.to_string(),
            });
            eprintln!("{diag}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // Help and version output.
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    if let Ok(threads) = std::env::var("CONVPOW_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
        }
    }

    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{}", diagnostic_json(&err));
            match err {
                Error::NotNormalized { .. }
                | Error::DispersiveCase { .. }
                | Error::AllModulusOne { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Analyze { input, order } => {
            let a = input.sequence()?;
            let report = analyze(&a, order)?;
            let json = SymbolReportJson::from_report(&report, order)?;
            print!("{}", to_json_pretty(&json));
            Ok(ExitCode::SUCCESS)
        }
        Command::Expand {
            input,
            order,
            n,
            out,
            slopes,
            envelope_c,
            envelope_rate,
        } => {
            let a = input.sequence()?;
            let plan = ExpansionPlan::new(&a, order)?;
            let res = plan.remainder(n)?;
            let envelope = plan.check_envelope(n, envelope_c, envelope_rate)?;

            let mut norms = None;
            let slopes_json = if slopes {
                let ns = default_n_list(n);
                let measured = plan.remainder_norms(&ns)?;
                let linf = fit_slope(
                    &measured
                        .iter()
                        .map(|r| (r.n as f64, r.linf))
                        .collect::<Vec<_>>(),
                )?;
                let l1 = fit_slope(
                    &measured
                        .iter()
                        .map(|r| (r.n as f64, r.l1))
                        .collect::<Vec<_>>(),
                )?;
                let json = SlopesJson {
                    points: measured.len(),
                    linf: (&linf).into(),
                    l1: (&l1).into(),
                };
                norms = Some(measured);
                Some(json)
            } else {
                None
            };

            if let Some(prefix) = &out {
                let mut profile = std::io::BufWriter::new(std::fs::File::create(format!(
                    "{prefix}_profile.csv"
                ))?);
                convpow::report::write_profile_csv(
                    &mut profile,
                    &plan,
                    &res,
                    envelope_c,
                    envelope_rate,
                )?;
                profile.flush()?;
                if let Some(measured) = &norms {
                    let mut slopes_file = std::io::BufWriter::new(std::fs::File::create(format!(
                        "{prefix}_slopes.csv"
                    ))?);
                    convpow::report::write_slopes_csv(&mut slopes_file, measured)?;
                    slopes_file.flush()?;
                }
            }

            let summary = ExpandSummaryJson {
                scheme: input.describe(),
                order,
                n,
                window_lo: res.offset,
                window_hi: res.offset + res.exact.len() as i64 - 1,
                linf: res.linf,
                l1: res.l1,
                envelope: (&envelope).into(),
                slopes: slopes_json,
            };
            print!("{}", to_json_pretty(&summary));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => {
            let reports = if suite == "all" {
                suite_names()
                    .iter()
                    .map(|name| run_suite(name))
                    .collect::<Result<Vec<_>>>()?
            } else {
                vec![run_suite(&suite)?]
            };
            for report in &reports {
                print!("{}", to_json_pretty(report));
            }
            if reports.iter().all(|r| r.passed) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
        Command::Convolve { files, power } => {
            let result = match files.as_slice() {
                [a, b] => {
                    if power.is_some() {
                        return Err(Error::Parse(
                            "--power applies to a single --file, not two".into(),
                        ));
                    }
                    Sequence::read_file(a)?.convolve(&Sequence::read_file(b)?)
                }
                [a] => {
                    let n = power
                        .ok_or_else(|| Error::Parse("a single --file needs --power <n>".into()))?;
                    Sequence::read_file(a)?.power(n)?
                }
                _ => {
                    return Err(Error::Parse(
                        "pass --file once with --power, or exactly twice".into(),
                    ))
                }
            };
            println!("{}", result.to_json());
            Ok(ExitCode::SUCCESS)
        }
    }
}
