use std::io::Write;

use serde::{Deserialize, Serialize};

/// One line of experiment output. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub trial: u64,
    pub seed: u64,
    pub n: u64,
    pub r: f64,
    pub d: usize,
    pub profile: String,
    pub outcome: String,
    pub rounds: u32,
    pub min_step_gain: Option<f64>,
    pub fault_reason: Option<String>,
    pub wallclock_ms: f64,
}

pub const CSV_HEADER: [&str; 11] = [
    "trial",
    "seed",
    "n",
    "r",
    "d",
    "profile",
    "outcome",
    "rounds",
    "min_step_gain",
    "fault_reason",
    "wallclock_ms",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl ExperimentRow {
    fn record(&self) -> [String; 11] {
        [
            self.trial.to_string(),
            self.seed.to_string(),
            self.n.to_string(),
            fmt_float(self.r),
            self.d.to_string(),
            self.profile.clone(),
            self.outcome.clone(),
            self.rounds.to_string(),
            self.min_step_gain.map(fmt_float).unwrap_or_default(),
            self.fault_reason.clone().unwrap_or_default(),
            fmt_float(self.wallclock_ms),
        ]
    }
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[ExperimentRow], out: W) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(out, rows)
}
