//! CSV and JSON artifacts.

use std::fs;
use std::path::Path;

use serde::Serialize;

use gadkit_core::decomposition::SweepRecord;

use crate::run::RunError;

/// Frozen column order of `sweep.csv`; `error` is empty on success.
pub const SWEEP_HEADER: [&str; 13] = [
    "m",
    "norm_A",
    "norm_pinv_TM",
    "norm_M_TU",
    "alias_error",
    "bias_error",
    "nescience_error",
    "risk_all",
    "risk_prediction_only",
    "rank_TM",
    "new_col_independent",
    "lambda",
    "error",
];

/// How the risk columns average, recorded in every `meta.json`.
pub const GRID_CONVENTION: &str = "risk_all is the mean squared error over training and prediction rows \
    weighted as one uniform grid; risk_prediction_only is the mean over prediction rows; the prediction \
    grid excludes training points";

fn sweep_row(r: &SweepRecord) -> [String; 13] {
    [
        r.m.to_string(),
        r.norm_a.to_string(),
        r.norm_pinv_tm.to_string(),
        r.norm_m_tu.to_string(),
        r.alias_error.to_string(),
        r.bias_error.to_string(),
        r.nescience_error.to_string(),
        r.risk_all.to_string(),
        r.risk_prediction_only.to_string(),
        r.rank_tm.to_string(),
        r.new_col_independent.to_string(),
        r.lambda.to_string(),
        r.error.clone().unwrap_or_default(),
    ]
}

pub fn write_sweep_csv(path: &Path, records: &[SweepRecord]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(SWEEP_HEADER)?;
    for r in records {
        w.write_record(sweep_row(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes serializable rows with their field names as the header.
pub fn write_rows_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), RunError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
