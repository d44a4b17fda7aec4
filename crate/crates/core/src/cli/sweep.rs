use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{format_float, parse_rational, to_f64};

use super::config::ScenarioConfig;
use super::record::ResultRecord;
use super::run::run;

pub const SWEEP_HEADER: [&str; 7] = [
    "axis_value",
    "packetization",
    "mean_rate",
    "std_rate",
    "centralized_rate",
    "uncoded_rate",
    "error",
];

/// One CSV row. Exact-rate schemes report their rate as the mean with zero
/// spread.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis_value: String,
    pub packetization: Option<String>,
    pub mean_rate: Option<f64>,
    pub std_rate: Option<f64>,
    pub centralized_rate: Option<f64>,
    pub uncoded_rate: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(axis_value: &str, error: String) -> Self {
        Self {
            axis_value: axis_value.to_string(),
            packetization: None,
            mean_rate: None,
            std_rate: None,
            centralized_rate: None,
            uncoded_rate: None,
            error: Some(error),
        }
    }

    fn from_record(axis_value: &str, record: &ResultRecord) -> Self {
        let (mean, std) = match (&record.monte_carlo, &record.rate) {
            (Some(mc), _) => (Some(mc.mean), Some(mc.std)),
            (None, Some(rate)) => (Some(rate.float), Some(0.0)),
            (None, None) => (None, None),
        };
        let centralized = match record.details.get("centralized_rate") {
            Some(Value::String(text)) => parse_rational(text).ok().map(|r| to_f64(&r)),
            _ if record.input.scheme == super::config::SchemeKind::Hypercube => {
                record.rate.as_ref().map(|r| r.float)
            }
            _ => None,
        };
        Self {
            axis_value: axis_value.to_string(),
            packetization: record.packetization.clone(),
            mean_rate: mean,
            std_rate: std,
            centralized_rate: centralized,
            uncoded_rate: record.uncoded_rate.as_ref().map(|r| r.float),
            error: (!record.passed).then(|| "verification failed".to_string()),
        }
    }

    fn fields(&self) -> [String; 7] {
        let f = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        [
            self.axis_value.clone(),
            self.packetization.clone().unwrap_or_default(),
            f(self.mean_rate),
            f(self.std_rate),
            f(self.centralized_rate),
            f(self.uncoded_rate),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Copy of `template` with `axis` set to `value`. `seed`, `trials` and
/// `verify` address the top level; any other key addresses `params`. The
/// value is read as JSON when possible, otherwise kept as a string.
pub fn with_axis(template: &ScenarioConfig, axis: &str, value: &str) -> Result<ScenarioConfig> {
    let parsed: Value = serde_json::from_str(value).unwrap_or_else(|_| Value::String(value.into()));
    let mut config = template.clone();
    match axis {
        "seed" | "trials" | "verify" => {
            let mut top = serde_json::to_value(&config)?;
            top[axis] = parsed;
            config = serde_json::from_value(top).map_err(|e| Error::Config(format!("{axis}: {e}")))?;
        }
        _ => {
            let Value::Object(params) = &mut config.params else {
                return Err(Error::Config("params must be a JSON object".into()));
            };
            params.insert(axis.to_string(), parsed);
        }
    }
    Ok(config)
}

/// Runs every axis value (in parallel) and returns rows in input order.
pub fn sweep(template: &ScenarioConfig, axis: &str, values: &[String]) -> Vec<SweepRow> {
    values
        .par_iter()
        .map(|value| {
            match with_axis(template, axis, value).and_then(|c| run(&c)) {
                Ok(record) => SweepRow::from_record(value, &record),
                Err(e) => SweepRow::failed(value, e.to_string()),
            }
        })
        .collect()
}

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `<dir>/sweep.csv`.
pub fn write_sweep(rows: &[SweepRow], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let file = std::fs::File::create(dir.join("sweep.csv"))?;
    write_sweep_csv(rows, file)
}
