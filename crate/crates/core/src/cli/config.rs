//! Scenario configuration.
//!
//! ```json
//! {
//!   "scheme": "hypercube",
//!   "params": { "q": 3 },
//!   "seed": 7,
//!   "trials": 1,
//!   "verify": true,
//!   "output": "out/hc-3d"
//! }
//! ```
//!
//! Every rational parameter is a string: `"p/q"`, an integer or a
//! terminating decimal. Unknown keys are rejected at both levels.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{parse_rational, Rational};

/// Environment variable consulted when a config carries no seed.
pub const SEED_ENV: &str = "D2D_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Hypercube,
    Decentralized,
    Rsgraph,
    Spatial,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scheme: SchemeKind,
    #[serde(default = "empty_object")]
    pub params: Value,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default = "default_true")]
    pub verify: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

fn default_true() -> bool {
    true
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Config seed, else `$D2D_SEED`, else `0`.
    pub fn effective_seed(&self) -> Result<u64> {
        if let Some(seed) = self.seed {
            return Ok(seed);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|e| Error::Config(format!("{SEED_ENV}={v:?}: {e}"))),
            Err(_) => Ok(0),
        }
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or(1)
    }

    pub fn parsed_params(&self) -> Result<SchemeParams> {
        fn parse<T: for<'de> Deserialize<'de>>(kind: &str, v: &Value) -> Result<T> {
            T::deserialize(v).map_err(|e| Error::Config(format!("{kind} params: {e}")))
        }
        Ok(match self.scheme {
            SchemeKind::Hypercube => SchemeParams::Hypercube(parse("hypercube", &self.params)?),
            SchemeKind::Decentralized => {
                SchemeParams::Decentralized(parse("decentralized", &self.params)?)
            }
            SchemeKind::Rsgraph => SchemeParams::Rsgraph(parse("rsgraph", &self.params)?),
            SchemeKind::Spatial => SchemeParams::Spatial(parse("spatial", &self.params)?),
        })
    }
}

pub enum SchemeParams {
    Hypercube(HypercubeConfig),
    Decentralized(DecentralizedConfig),
    Rsgraph(RsGraphConfig),
    Spatial(SpatialConfig),
}

/// `n = t·q` users with `t = (q-1)/c + 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypercubeConfig {
    pub q: u32,
    #[serde(default = "one")]
    pub c: u32,
    /// Library size `m`; defaults to `n`.
    #[serde(default)]
    pub files: Option<usize>,
    /// Demanded file per user; defaults to user `u` requesting file `u`.
    #[serde(default)]
    pub demands: Option<Vec<usize>>,
    /// Draw distinct demands from the run seed instead.
    #[serde(default)]
    pub random_demands: bool,
}

fn one() -> u32 {
    1
}

/// Either a fixed count matrix (full delivery and verification) or random
/// placements (Monte Carlo over `trials`).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecentralizedConfig {
    pub users: usize,
    pub q: u32,
    pub t_prime: u32,
    #[serde(default)]
    pub counts: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub files: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RsConstructConfig {
    pub lambda: u32,
    pub z: u32,
}

/// Exactly one graph source: `fixture` (`"fig5"`), `graph` (edge-list file)
/// or `construct`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RsGraphConfig {
    #[serde(default)]
    pub fixture: Option<String>,
    #[serde(default)]
    pub graph: Option<PathBuf>,
    #[serde(default)]
    pub construct: Option<RsConstructConfig>,
    #[serde(default)]
    pub gamma: Option<usize>,
    #[serde(default)]
    pub files: Option<usize>,
    /// Declared `M`; defaults to the graph requirement `m(n - d_min)/n`.
    #[serde(default)]
    pub cache: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpatialConfig {
    pub users: usize,
    pub cluster_size: usize,
    pub files: usize,
    pub cache: String,
    /// Squared transmission range `r²`.
    pub range_sq: String,
    pub delta: String,
    #[serde(default = "one_str")]
    pub link_rate: String,
    /// Link rate `C_√2` at full range, for the gap calculators.
    #[serde(default = "one_str")]
    pub full_range_rate: String,
    #[serde(default)]
    pub reuse: Option<u64>,
}

fn one_str() -> String {
    "1".into()
}

pub fn rational_field(name: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| Error::Config(format!("{name}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let c = ScenarioConfig::from_json(r#"{"scheme":"hypercube","params":{"q":3}}"#).unwrap();
        assert!(c.verify);
        assert_eq!(c.trials(), 1);
        assert!(matches!(c.parsed_params().unwrap(), SchemeParams::Hypercube(h) if h.q == 3 && h.c == 1));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(ScenarioConfig::from_json(r#"{"scheme":"hypercube","color":1}"#).is_err());
        let c = ScenarioConfig::from_json(r#"{"scheme":"hypercube","params":{"q":3,"t":3}}"#).unwrap();
        assert!(c.parsed_params().is_err());
        assert!(ScenarioConfig::from_json(r#"{"scheme":"torus"}"#).is_err());
    }
}
