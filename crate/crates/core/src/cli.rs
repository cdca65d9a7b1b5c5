//! Command-line front end.
//!
//! Exit status is 0 on success, 1 when a check finds violations and 2 on
//! bad input. Output depends only on the command, its inputs and the seed.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::builtin::TWO_GAP_JSON;
use crate::error::{Error, Result};
use crate::grid::{check_grid_oracle, geodelta_report, make_geodelta, GridOracleReport, DEFAULT_CELL_CAP};
use crate::model::SplitProfile;
use crate::oracle::{check_strategy_formulas, AllocationOracle, StrategyOracleReport};
use crate::protocol::{optimal_preferences, property_sweep, resolve_protocol};
use crate::report::{candidate_rows, protocol_report, write_csv, write_json, Provenance, Report};
use crate::strategy::SplitGame;

#[derive(Debug, Clone, Parser)]
#[command(name = "lry", version, about = "Two-party redistricting by nested splits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run the protocol on a profile file (`-` reads standard input).
    Simulate {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check every invariant on random valid profiles.
    Verify {
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in ten-district profile that ends two districts short.
    #[command(name = "example-2gap")]
    ExampleTwoGap {
        #[command(flatten)]
        common: Common,
    },
    /// Run the constrained grid family and report the gap to the target.
    Geodelta {
        #[arg(long)]
        delta: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compare closed forms and grid counting with exhaustive search.
    Oracle {
        /// Random grids to enumerate.
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
        oracle_cap: usize,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Simulate { common, .. }
            | Command::Verify { common, .. }
            | Command::ExampleTwoGap { common }
            | Command::Geodelta { common, .. }
            | Command::Oracle { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Simulate { .. } => "simulate",
            Command::Verify { .. } => "verify",
            Command::ExampleTwoGap { .. } => "example-2gap",
            Command::Geodelta { .. } => "geodelta",
            Command::Oracle { .. } => "oracle",
        }
    }
}

/// Whether a finished command found violations.
enum Verdict {
    Clean,
    Violations,
}

/// Runs one command, writing the report to `out` and diagnostics to `err`.
pub fn run_command(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, stdin, out) {
        Ok(Verdict::Clean) => 0,
        Ok(Verdict::Violations) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> Result<Vec<u8>> {
    let fail = |e: std::io::Error| Error::Input { path: path.display().to_string(), reason: e.to_string() };
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        stdin.read_to_end(&mut buf).map_err(fail)?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(fail)
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, provenance: Provenance, body: T) -> Result<()> {
    write_json(out, &Report { provenance, body })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckRow {
    command: String,
    seed: u64,
    input_digest: String,
    check: String,
    cases: u64,
    violations: u64,
}

fn check_rows(provenance: &Provenance, rows: impl IntoIterator<Item = (String, u64, u64)>) -> Vec<CheckRow> {
    rows.into_iter()
        .map(|(check, cases, violations)| CheckRow {
            command: provenance.command.clone(),
            seed: provenance.seed,
            input_digest: provenance.input_digest.clone(),
            check,
            cases,
            violations,
        })
        .collect()
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<Verdict> {
    let Common { seed, format } = *cli.command.common();
    let name = cli.command.name();
    match &cli.command {
        Command::Simulate { input, .. } => {
            let bytes = read_input(input, stdin)?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|e| Error::Input { path: input.display().to_string(), reason: e.to_string() })?;
            run_profile(SplitProfile::from_json(&text)?, Provenance::new(name, seed, &bytes), format, out)
        }
        Command::ExampleTwoGap { .. } => {
            let profile = SplitProfile::from_json(TWO_GAP_JSON)?;
            run_profile(profile, Provenance::new(name, seed, TWO_GAP_JSON.as_bytes()), format, out)
        }
        Command::Verify { count, n_max, .. } => {
            let provenance = Provenance::new(name, seed, format!("count={count};n-max={n_max}").as_bytes());
            let report = property_sweep(*count, *n_max, seed)?;
            match format {
                Format::Json => emit(out, provenance, &report)?,
                Format::Csv => {
                    let rows = report.checks.iter().map(|(&inv, &cases)| {
                        let bad = report.violations.iter().filter(|v| v.invariant == inv).count() as u64;
                        (inv.to_string(), cases, bad)
                    });
                    write_csv(out, &check_rows(&provenance, rows))?
                }
            }
            Ok(if report.is_clean() { Verdict::Clean } else { Verdict::Violations })
        }
        Command::Geodelta { delta, .. } => {
            let provenance = Provenance::new(name, seed, format!("delta={delta}").as_bytes());
            let report = geodelta_report(*delta, seed)?;
            match format {
                Format::Json => emit(out, provenance, &report)?,
                Format::Csv => write_csv(out, &candidate_rows(&make_geodelta(*delta)?, &report.run, &provenance)?)?,
            }
            Ok(Verdict::Clean)
        }
        Command::Oracle { count, oracle_cap, .. } => {
            let allocation = AllocationOracle::default();
            let provenance = Provenance::new(
                name,
                seed,
                format!(
                    "count={count};oracle-cap={oracle_cap};granularity={};max-districts={}",
                    allocation.granularity, allocation.max_districts
                )
                .as_bytes(),
            );
            let strategy = check_strategy_formulas(&allocation);
            let grid = check_grid_oracle(*count, seed, *oracle_cap)?;
            let clean = strategy.mismatches.is_empty() && grid.is_clean();
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a> {
                        strategy: &'a StrategyOracleReport,
                        grid: &'a GridOracleReport,
                    }
                    emit(out, provenance, Body { strategy: &strategy, grid: &grid })?
                }
                Format::Csv => {
                    let rows = [
                        ("strategy_formulas".to_string(), strategy.sides_checked, strategy.mismatches.len() as u64),
                        ("grid_bruteforce".to_string(), grid.grids, grid.mismatches.len() as u64),
                        ("shrunk_analogue".to_string(), grid.shrunk_sides, 0),
                    ];
                    write_csv(out, &check_rows(&provenance, rows))?
                }
            }
            Ok(if clean { Verdict::Clean } else { Verdict::Violations })
        }
    }
}

fn run_profile(profile: SplitProfile, provenance: Provenance, format: Format, out: &mut dyn Write) -> Result<Verdict> {
    let valid = profile.clone().validate()?;
    let prefs = optimal_preferences(&valid);
    let run = resolve_protocol(&valid, &prefs, provenance.seed)?;
    debug_assert_eq!(run.n, valid.district_count());
    let verdict = match format {
        Format::Json => {
            let report = protocol_report(&valid, &prefs, run, Some(profile))?;
            let ok = report.summary.within_bounds;
            emit(out, provenance, report)?;
            ok
        }
        Format::Csv => {
            let ok = protocol_report(&valid, &prefs, run.clone(), None)?.summary.within_bounds;
            write_csv(out, &candidate_rows(&valid, &run, &provenance)?)?;
            ok
        }
    };
    Ok(if verdict { Verdict::Clean } else { Verdict::Violations })
}
