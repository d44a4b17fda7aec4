use serde_json::json;

use crate::error::{Error, Result};

use super::config::ScenarioConfig;

/// Built-in scenarios: `(name, description)`.
pub const FIXTURES: [(&str, &str); 5] = [
    ("hc-2d", "hypercube, n=4 users, q=2: K=4, R=2"),
    ("hc-3d", "hypercube, n=9 users, q=3: K=27, R=3"),
    ("dec-32", "decentralized, n=32, counts [[6,3,6],[7,6,4]]: R=220/9"),
    ("rs-fig5", "induced matchings of the 6-cycle: K=18, R=2/3"),
    ("grid-81", "9x9 grid in 9 clusters of 9, reuse factor 4"),
];

pub fn fixture_config(name: &str) -> Result<ScenarioConfig> {
    let value = match name {
        "hc-2d" => json!({ "scheme": "hypercube", "params": { "q": 2 } }),
        "hc-3d" => json!({ "scheme": "hypercube", "params": { "q": 3 } }),
        "dec-32" => json!({
            "scheme": "decentralized",
            "params": { "users": 32, "q": 3, "t_prime": 2, "counts": [[6, 3, 6], [7, 6, 4]] }
        }),
        "rs-fig5" => json!({ "scheme": "rsgraph", "params": { "fixture": "fig5" } }),
        "grid-81" => json!({
            "scheme": "spatial",
            "params": {
                "users": 81,
                "cluster_size": 9,
                "files": 81,
                "cache": "27",
                "range_sq": "2/81",
                "delta": "1",
                "reuse": 4
            }
        }),
        _ => {
            let names: Vec<&str> = FIXTURES.iter().map(|(n, _)| *n).collect();
            return Err(Error::Config(format!(
                "unknown fixture {name:?}; available: {}",
                names.join(", ")
            )));
        }
    };
    let mut config: ScenarioConfig = serde_json::from_value(value)?;
    config.seed = Some(0);
    config.output = Some(format!("out/{name}").into());
    Ok(config)
}
