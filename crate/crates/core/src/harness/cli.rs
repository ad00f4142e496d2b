//! Command-line front end. [`run`] returns the process exit code.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::fit::fit_capture_scaling;
use super::row::{write_csv, write_json, ExperimentRow};
use super::runner::{run_sweep, run_trial, CopKind, RobberKind, StartKind, TrialSpec};
use super::suites::{lemma_report, oracle_suite, LemmaSettings};
use crate::profile::ScaleProfile;
use crate::seed::child_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Continuous,
    Discrete,
}

#[derive(Debug, Parser)]
#[command(
    name = "rgg-pursuit",
    version,
    about = "Cop and robber pursuit in the unit cube and on random geometric graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Radius; `sweep` takes a comma-separated list.
    #[arg(long)]
    r: Option<String>,
    /// Number of graph vertices.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    max_rounds: Option<u32>,
    /// `paper`, `desk` or a path to a JSON profile.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// JSON-lines trace of the first trial.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Exit with status 1 if any game faults.
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Games in the continuous cube.
    Continuous {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = CopKind::Paper)]
        cop: CopKind,
        #[arg(long, value_enum, default_value_t = RobberKind::Paper)]
        robber: RobberKind,
        #[arg(long, value_enum, default_value_t = StartKind::Fixed)]
        start: StartKind,
    },
    /// Games on a random geometric graph.
    Discrete {
        #[command(flatten)]
        common: Common,
    },
    /// A grid of radii times seeds.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ModeArg::Continuous)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = CopKind::Paper)]
        cop: CopKind,
        #[arg(long, value_enum, default_value_t = RobberKind::Paper)]
        robber: RobberKind,
        #[arg(long, value_enum, default_value_t = StartKind::Fixed)]
        start: StartKind,
    },
    /// Cover, occupancy and union-bound checks.
    Lemma {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        cover_trials: u64,
        #[arg(long, default_value_t = 5e-4)]
        area: f64,
        #[arg(long, default_value_t = 10_000)]
        occupancy_n: u64,
    },
    /// Dismantlability against the brute-force solver.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl Common {
    fn profile(&self, default: &str) -> Result<ScaleProfile, CliError> {
        match self.profile.as_deref().unwrap_or(default) {
            "paper" => Ok(ScaleProfile::paper(self.d)),
            "desk" => Ok(ScaleProfile::desk()),
            path => ScaleProfile::from_json_file(Path::new(path))
                .map_err(|e| usage(format!("profile {path}: {e}"))),
        }
    }

    fn radii(&self, default: f64) -> Result<Vec<f64>, CliError> {
        let Some(text) = &self.r else {
            return Ok(vec![default]);
        };
        text.split(',')
            .map(|s| {
                let r: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("bad radius {s:?}")))?;
                if r > 0.0 && r.is_finite() {
                    Ok(r)
                } else {
                    Err(usage(format!("radius must be positive, got {r}")))
                }
            })
            .collect()
    }

    fn radius(&self, default: f64) -> Result<f64, CliError> {
        match self.radii(default)?.as_slice() {
            [r] => Ok(*r),
            _ => Err(usage("--r takes a single value here")),
        }
    }

    fn output(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn emit_rows(&self, rows: &[ExperimentRow]) -> Result<(), CliError> {
        let mut out = self.output()?;
        match self.format {
            Format::Csv => {
                write_csv(rows, &mut out).map_err(|e| CliError::Failed(e.to_string()))?
            }
            Format::Json => {
                write_json(rows, &mut out).map_err(|e| CliError::Failed(e.to_string()))?;
                writeln!(out)?;
            }
        }
        out.flush()?;
        Ok(())
    }

    fn emit_value<T: Serialize>(
        &self,
        value: &T,
        csv_rows: Vec<Vec<String>>,
    ) -> Result<(), CliError> {
        let mut out = self.output()?;
        match self.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, value)
                    .map_err(|e| CliError::Failed(e.to_string()))?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut out);
                for rec in csv_rows {
                    w.write_record(rec)
                        .map_err(|e| CliError::Failed(e.to_string()))?;
                }
                w.flush()?;
            }
        }
        out.flush()?;
        Ok(())
    }

    fn strict_status(&self, rows: &[ExperimentRow]) -> i32 {
        let faults = rows.iter().filter(|row| row.outcome == "fault").count();
        if self.strict && faults > 0 {
            eprintln!("{faults} game(s) faulted");
            1
        } else {
            0
        }
    }
}

/// Runs `trials` games at one radius, writing the first trace if asked.
fn run_games(common: &Common, spec: TrialSpec) -> Result<i32, CliError> {
    let trials = common.trials.unwrap_or(1);
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if let Some(path) = &common.trace {
        let first = run_trial(&spec, 0, child_seed(common.seed, 0));
        first
            .trace
            .write_jsonl(BufWriter::new(File::create(path)?))?;
    }
    let rows = run_sweep(&spec, &[spec.r], trials, common.seed, common.jobs)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    common.emit_rows(&rows)?;
    Ok(common.strict_status(&rows))
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Continuous {
            common,
            cop,
            robber,
            start,
        } => {
            let mut spec = TrialSpec::continuous(
                common.d,
                common.radius(0.1)?,
                common.profile("paper")?,
                cop,
                robber,
            );
            spec.max_rounds = common.max_rounds;
            spec.start = start;
            run_games(&common, spec)
        }
        Command::Discrete { common } => {
            let mut spec = TrialSpec::discrete(
                common.d,
                common.radius(0.25)?,
                common.n.unwrap_or(200_000),
                common.profile("desk")?,
            );
            spec.max_rounds = common.max_rounds;
            run_games(&common, spec)
        }
        Command::Sweep {
            common,
            mode,
            cop,
            robber,
            start,
        } => {
            let radii = common.radii(0.1)?;
            let mut spec = match mode {
                ModeArg::Continuous => {
                    TrialSpec::continuous(common.d, radii[0], common.profile("paper")?, cop, robber)
                }
                ModeArg::Discrete => TrialSpec::discrete(
                    common.d,
                    radii[0],
                    common.n.unwrap_or(200_000),
                    common.profile("desk")?,
                ),
            };
            spec.max_rounds = common.max_rounds;
            if spec.mode == crate::game::Mode::Continuous {
                spec.start = start;
            }
            let rows = run_sweep(
                &spec,
                &radii,
                common.trials.unwrap_or(10),
                common.seed,
                common.jobs,
            )
            .map_err(|e| CliError::Failed(e.to_string()))?;
            common.emit_rows(&rows)?;
            match fit_capture_scaling(&rows) {
                Ok(fit) => eprintln!(
                    "fit: exponent {:.4}, coefficient {:.4}",
                    fit.exponent, fit.coefficient
                ),
                Err(e) => eprintln!("fit: {e}"),
            }
            Ok(common.strict_status(&rows))
        }
        Command::Lemma {
            common,
            cover_trials,
            area,
            occupancy_n,
        } => {
            if common.d != 2 {
                return Err(usage("lemma checks are planar; use --d 2"));
            }
            if !(0.0..=1.0).contains(&area) {
                return Err(usage("--area must lie in [0, 1]"));
            }
            let settings = LemmaSettings {
                r: common.radius(0.25)?,
                n: common.n.unwrap_or(200_000) as u64,
                seed: common.seed,
                profile: common.profile("desk")?,
                cover_trials,
                occupancy_area: area,
                occupancy_n,
                occupancy_trials: common.trials.unwrap_or(10_000),
            };
            let report = lemma_report(&settings).map_err(|e| usage(e.to_string()))?;
            let f = crate::harness::row::fmt_float;
            let csv_rows = vec![
                vec!["key".into(), "value".into()],
                vec!["profile".into(), report.profile.clone()],
                vec!["r".into(), f(report.r)],
                vec!["n".into(), report.n.to_string()],
                vec!["rectangles".into(), report.rectangles.to_string()],
                vec!["grid_step".into(), f(report.grid_step)],
                vec!["rect_area".into(), f(report.rect_area)],
                vec![
                    "cover_trials".into(),
                    report.cover_property.trials.to_string(),
                ],
                vec![
                    "cover_covered".into(),
                    report.cover_property.covered.to_string(),
                ],
                vec![
                    "empty_rectangles".into(),
                    report
                        .empty_rectangles
                        .map(|e| e.to_string())
                        .unwrap_or_default(),
                ],
                vec!["union_bound".into(), f(report.union_bound)],
                vec!["log_union_bound".into(), f(report.log_union_bound)],
                vec![
                    "occupancy_expected".into(),
                    f(report.occupancy.expected_fraction),
                ],
                vec![
                    "occupancy_observed".into(),
                    f(report.occupancy.observed_fraction),
                ],
                vec!["occupancy_z".into(), f(report.occupancy.z)],
            ];
            common.emit_value(&report, csv_rows)?;
            let ok = report.cover_property.covered == report.cover_property.trials
                && report.occupancy.z <= 3.0;
            Ok(if common.strict && !ok { 1 } else { 0 })
        }
        Command::Oracle { common, max_n } => {
            if !(1..=crate::verification::oracle::MAX_SOLVER_N).contains(&max_n) {
                return Err(usage("--max-n must be between 1 and 60"));
            }
            let rows = oracle_suite(common.trials.unwrap_or(50), max_n, common.seed);
            let mut csv_rows = vec![["trial", "n", "edges", "dismantlable", "copwin", "agree"]
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()];
            csv_rows.extend(rows.iter().map(|row| {
                vec![
                    row.trial.to_string(),
                    row.n.to_string(),
                    row.edges.to_string(),
                    row.dismantlable.to_string(),
                    row.copwin.to_string(),
                    row.agree.to_string(),
                ]
            }));
            common.emit_value(&rows, csv_rows)?;
            let disagreements = rows.iter().filter(|row| !row.agree).count();
            if disagreements > 0 {
                eprintln!("{disagreements} disagreement(s)");
                return Ok(1);
            }
            Ok(0)
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
