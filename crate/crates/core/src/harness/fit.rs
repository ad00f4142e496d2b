use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::row::ExperimentRow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("InsufficientData: {0}")]
    InsufficientData(String),
}

/// `median rounds ≈ coefficient · (1/r²)^exponent`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub coefficient: f64,
    /// `(r, median rounds)` per radius, ascending in `r`.
    pub medians: Vec<(f64, f64)>,
}

fn median(sorted: &[u32]) -> f64 {
    let m = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[m] as f64
    } else {
        (sorted[m - 1] as f64 + sorted[m] as f64) / 2.0
    }
}

/// Least-squares slope of `ln(median rounds)` against `ln(1/r²)`.
pub fn fit_capture_scaling(rows: &[ExperimentRow]) -> Result<ScalingFit, FitError> {
    if let Some(bad) = rows.iter().find(|row| row.outcome != "captured") {
        return Err(FitError::InsufficientData(format!(
            "trial {} ended {}",
            bad.trial, bad.outcome
        )));
    }
    let mut groups: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for row in rows {
        if !(row.r > 0.0 && row.r.is_finite()) {
            return Err(FitError::InsufficientData(format!("radius {}", row.r)));
        }
        groups
            .entry(row.r.to_bits())
            .or_default()
            .push(row.rounds.max(1));
    }
    if groups.len() < 3 {
        return Err(FitError::InsufficientData(format!(
            "{} distinct radii, need 3",
            groups.len()
        )));
    }
    let medians: Vec<(f64, f64)> = groups
        .into_iter()
        .map(|(bits, mut rounds)| {
            rounds.sort_unstable();
            (f64::from_bits(bits), median(&rounds))
        })
        .collect();
    let pts: Vec<(f64, f64)> = medians
        .iter()
        .map(|&(r, m)| ((1.0 / (r * r)).ln(), m.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let exponent = sxy / sxx;
    Ok(ScalingFit {
        exponent,
        coefficient: (my - exponent * mx).exp(),
        medians,
    })
}
