use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::decentralized::McStats;
use crate::error::Result;
use crate::model::{format_rational, to_f64, Rational};
use crate::verify::RecoverySummary;

use super::config::{ScenarioConfig, SchemeKind};

/// Exact value next to its float rendering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalValue {
    pub exact: String,
    pub float: f64,
}

impl From<&Rational> for RationalValue {
    fn from(value: &Rational) -> Self {
        Self {
            exact: format_rational(value),
            float: to_f64(value),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub passed: bool,
    /// Named boolean checks.
    pub checks: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovery: Option<RecoverySummary>,
}

/// Everything one `run` produces. Identical inputs give identical records
/// apart from `wall_clock_seconds`.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRecord {
    pub scheme: SchemeKind,
    pub input: ScenarioConfig,
    pub seed: u64,
    /// Packets per file `K`, as a decimal string.
    pub packetization: Option<String>,
    pub rate: Option<RationalValue>,
    pub uncoded_rate: Option<RationalValue>,
    pub throughput: Option<RationalValue>,
    pub monte_carlo: Option<McStats>,
    pub details: Value,
    pub verification: Option<Verification>,
    pub passed: bool,
    pub wall_clock_seconds: f64,
}

impl ResultRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Writes `<dir>/record.json`, creating `dir` if needed.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("record.json"), self.to_json()?)?;
        Ok(())
    }
}
