use std::time::Instant;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::decentralized::{
    centralized_rate, dec_cache_assignment, dec_delivery, dec_monte_carlo, dec_place_with,
    dec_rounds, trial_rng, DecentralizedParams, PlacementCounts,
};
use crate::error::{Error, Result};
use crate::hypercube::{compare_to_groupcast, hc_delivery, hc_placement, hc_rate, HypercubeParams};
use crate::model::{
    distinct_demands, format_rational, groupcast_baseline, measured_rate, uncoded_rate,
    DemandVector, NetworkParams, Rational,
};
use crate::rsgraph::{
    degree_lower_bound, fig5_fixture, graph_memory, rs_construct, rs_decompose, rs_delivery,
    rs_memory_bound, rs_packetization, rs_placement, rs_total_rate, verify_rs_property, Graph,
    RsConstructionParams, RsDecomposition,
};
use crate::spatial::{
    build_reuse_sets, clustered_hc_delivery, clustered_throughput_hc, hc_gaps,
    packetization_reduction, GridNetwork, ProtocolParams,
};
use crate::verify::verify_all;

use super::config::{
    rational_field, DecentralizedConfig, HypercubeConfig, RsGraphConfig, ScenarioConfig,
    SchemeParams, SpatialConfig,
};
use super::record::{RationalValue, ResultRecord, Verification};

/// Largest `users · files · K/q` (cache entries) verified after a Monte Carlo
/// run.
const MC_VERIFY_BUDGET: u64 = 2_000_000;

/// Scheme outputs before they are wrapped into a [`ResultRecord`].
#[derive(Default)]
struct Outcome {
    packetization: Option<String>,
    rate: Option<Rational>,
    uncoded: Option<Rational>,
    throughput: Option<Rational>,
    monte_carlo: Option<crate::decentralized::McStats>,
    details: serde_json::Map<String, Value>,
    verification: Option<Verification>,
}

/// Runs one scenario. Scheme-level errors (bad parameters) are returned;
/// failed verification is reported through `passed = false`.
pub fn run(config: &ScenarioConfig) -> Result<ResultRecord> {
    let start = Instant::now();
    let seed = config.effective_seed()?;
    let outcome = match config.parsed_params()? {
        SchemeParams::Hypercube(p) => run_hypercube(&p, config, seed)?,
        SchemeParams::Decentralized(p) => run_decentralized(&p, config, seed)?,
        SchemeParams::Rsgraph(p) => run_rsgraph(&p, config)?,
        SchemeParams::Spatial(p) => run_spatial(&p, config)?,
    };
    let passed = outcome.verification.as_ref().is_none_or(|v| v.passed);
    Ok(ResultRecord {
        scheme: config.scheme,
        input: config.clone(),
        seed,
        packetization: outcome.packetization,
        rate: outcome.rate.as_ref().map(RationalValue::from),
        uncoded_rate: outcome.uncoded.as_ref().map(RationalValue::from),
        throughput: outcome.throughput.as_ref().map(RationalValue::from),
        monte_carlo: outcome.monte_carlo,
        details: Value::Object(outcome.details),
        verification: outcome.verification,
        passed,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

fn exact(value: &Rational) -> Value {
    Value::String(format_rational(value))
}

fn run_hypercube(p: &HypercubeConfig, config: &ScenarioConfig, seed: u64) -> Result<Outcome> {
    let params = HypercubeParams::with_multiplicity(p.q, p.c)?;
    let n = params.users();
    let files = p.files.unwrap_or(n);
    let library = params.library(files)?;
    let demands = match (&p.demands, p.random_demands) {
        (Some(d), _) => DemandVector::new(d.clone(), files, true)?,
        (None, true) => distinct_demands(n, files, Some(seed))?,
        (None, false) => DemandVector::identity(n),
    };
    let rate = hc_rate(&params);
    let comparison = compare_to_groupcast(&params);
    let mut out = Outcome {
        packetization: Some(params.packetization().to_string()),
        uncoded: Some(uncoded_rate(&library)),
        ..Outcome::default()
    };
    out.details.insert(
        "lattice".into(),
        json!({ "q": params.q(), "t": params.t(), "c": params.c(), "users": n }),
    );
    out.details.insert("demands".into(), json!(demands.as_slice()));
    out.details
        .insert("comparison".into(), serde_json::to_value(&comparison)?);
    if config.verify {
        let cache = hc_placement(&params, &library)?;
        let schedule = hc_delivery(&params, &demands)?;
        let (verdicts, report) = verify_all(&cache, &schedule, &demands, &library)?;
        let measured = measured_rate(&schedule);
        let rate_matches = measured == rate;
        out.verification = Some(Verification {
            passed: verdicts.passed() && verdicts.exactly_once && rate_matches,
            checks: json!({
                "verdicts": verdicts,
                "measured_rate": exact(&measured),
                "rate_matches_formula": rate_matches,
                "messages": schedule.len(),
            }),
            recovery: Some(report.summary()),
        });
    }
    out.rate = Some(rate);
    Ok(out)
}

fn run_decentralized(p: &DecentralizedConfig, config: &ScenarioConfig, seed: u64) -> Result<Outcome> {
    let params = DecentralizedParams::new(p.users, p.q, p.t_prime)?;
    let files = p.files.unwrap_or(p.users);
    let library = params.library(files)?;
    let mut out = Outcome {
        packetization: Some(params.packetization().to_string()),
        uncoded: Some(uncoded_rate(&library)),
        ..Outcome::default()
    };
    out.details.insert(
        "lattice".into(),
        json!({
            "n_prime": params.n_prime(),
            "t_prime": params.t_prime(),
            "q": params.q(),
            "c": params.c(),
        }),
    );
    out.details.insert(
        "instance_rate".into(),
        exact(&params.instance_rate()),
    );
    out.details.insert(
        "centralized_rate".into(),
        exact(&centralized_rate(params.users(), params.q())),
    );

    let counts = match &p.counts {
        Some(counts) => Some(PlacementCounts::from_counts(&params, counts)?),
        None => {
            let stats = dec_monte_carlo(&params, config.trials(), seed)?;
            out.monte_carlo = Some(stats);
            let entries = params
                .packetization()
                .to_u64()
                .and_then(|k| k.checked_mul((p.users * files) as u64))
                .map(|e| e / p.q as u64);
            match entries {
                Some(e) if config.verify && e <= MC_VERIFY_BUDGET => {
                    Some(dec_place_with(&params, &mut trial_rng(seed, 0)))
                }
                _ => {
                    if config.verify {
                        out.details.insert(
                            "verification_skipped".into(),
                            json!("placement too large to enumerate"),
                        );
                    }
                    None
                }
            }
        }
    };
    let Some(counts) = counts else {
        return Ok(out);
    };
    out.details.insert("counts".into(), json!(counts.counts()));
    let demands = DemandVector::identity(p.users);
    if config.verify {
        let (log, schedule) = match dec_delivery(&params, &counts, &demands) {
            Err(Error::UncachedPacketSet { row, col }) => {
                out.verification = Some(Verification {
                    passed: false,
                    checks: json!({ "uncached_packet_set": [row, col] }),
                    recovery: None,
                });
                return Ok(out);
            }
            other => other?,
        };
        let cache = dec_cache_assignment(&params, &counts, &library)?;
        let (verdicts, report) = verify_all(&cache, &schedule, &demands, &library)?;
        let measured = measured_rate(&schedule);
        let rate_matches = measured == log.total_rate;
        out.verification = Some(Verification {
            passed: verdicts.passed() && rate_matches,
            checks: json!({
                "verdicts": verdicts,
                "measured_rate": exact(&measured),
                "rate_matches_rounds": rate_matches,
                "messages": schedule.len(),
            }),
            recovery: Some(report.summary()),
        });
        if p.counts.is_some() {
            out.rate = Some(log.total_rate.clone());
        }
        out.details.insert("rounds".into(), serde_json::to_value(&log)?);
    } else if p.counts.is_some() {
        let log = dec_rounds(&params, &counts)?;
        out.rate = Some(log.total_rate.clone());
        out.details.insert("rounds".into(), serde_json::to_value(&log)?);
    }
    Ok(out)
}

fn rs_source(p: &RsGraphConfig) -> Result<(Graph, Option<RsDecomposition>, Value)> {
    match (&p.fixture, &p.graph, &p.construct) {
        (Some(name), None, None) => {
            if name != "fig5" {
                return Err(Error::Config(format!("unknown rsgraph fixture {name:?}")));
            }
            let (g, d, _) = fig5_fixture();
            Ok((g, Some(d), json!({ "fixture": name })))
        }
        (None, Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            Ok((Graph::parse_edge_list(&text)?, None, json!({ "edge_list": path })))
        }
        (None, None, Some(c)) => {
            let params = RsConstructionParams::new(c.lambda, c.z)?;
            let g = rs_construct(&params)?;
            let n = g.vertices() as f64;
            let bound = degree_lower_bound(c.lambda as f64, n);
            let degree_ok = (0..g.vertices()).all(|v| g.degree(v) as f64 >= bound);
            Ok((
                g,
                None,
                json!({
                    "construct": { "lambda": c.lambda, "z": c.z },
                    "mu": exact(&params.mu()),
                    "degree_lower_bound": bound,
                    "degree_bound_holds": degree_ok,
                    "memory_bound": rs_memory_bound(&params, p.files.unwrap_or(n as usize), None),
                }),
            ))
        }
        _ => Err(Error::Config(
            "rsgraph needs exactly one of `fixture`, `graph`, `construct`".into(),
        )),
    }
}

fn run_rsgraph(p: &RsGraphConfig, config: &ScenarioConfig) -> Result<Outcome> {
    let (graph, given, source) = rs_source(p)?;
    let n = graph.vertices();
    let decomposition = match given {
        Some(d) if p.gamma.is_none_or(|g| g == d.gamma) => d,
        _ => rs_decompose(&graph, p.gamma.unwrap_or(2)),
    };
    let files = p.files.unwrap_or(n);
    let cache_size = match &p.cache {
        Some(text) => rational_field("cache", text)?,
        None => graph_memory(&graph, files),
    };
    let library = NetworkParams::new(n, files, cache_size)?;
    let rate = rs_total_rate(&decomposition, n);
    let mut out = Outcome {
        packetization: Some(rs_packetization(n, decomposition.gamma).to_string()),
        uncoded: Some(uncoded_rate(&library)),
        ..Outcome::default()
    };
    out.details.insert("source".into(), source);
    out.details.insert(
        "graph".into(),
        json!({
            "vertices": n,
            "edges": graph.edge_count(),
            "min_degree": graph.min_degree(),
            "regular": graph.is_regular(),
            "isolated": graph.isolated_vertices(),
        }),
    );
    out.details.insert(
        "decomposition".into(),
        json!({
            "gamma": decomposition.gamma,
            "tau": decomposition.tau(),
            "residual_edges": decomposition.residual.len(),
            "matchings": decomposition.matchings,
        }),
    );
    if let Ok((k, r)) = groupcast_baseline(&library) {
        out.details.insert(
            "prior".into(),
            json!({ "packetization": k.to_string(), "rate": exact(&r) }),
        );
    }
    if config.verify {
        let cache = rs_placement(&graph, &decomposition, &library)?;
        let demands = DemandVector::identity(n);
        let schedule = rs_delivery(&graph, &decomposition, &demands)?;
        let (verdicts, report) = verify_all(&cache, &schedule, &demands, &library)?;
        let measured = measured_rate(&schedule);
        let rate_matches = measured == rate;
        let rs_property = verify_rs_property(&graph, &decomposition);
        out.verification = Some(Verification {
            passed: verdicts.passed() && verdicts.exactly_once && rate_matches && rs_property,
            checks: json!({
                "verdicts": verdicts,
                "rs_property": rs_property,
                "measured_rate": exact(&measured),
                "rate_matches_formula": rate_matches,
                "messages": schedule.len(),
            }),
            recovery: Some(report.summary()),
        });
    }
    out.rate = Some(rate);
    Ok(out)
}

fn run_spatial(p: &SpatialConfig, config: &ScenarioConfig) -> Result<Outcome> {
    let grid = GridNetwork::with_users(p.users)?;
    let protocol = ProtocolParams::new(
        rational_field("range_sq", &p.range_sq)?,
        rational_field("delta", &p.delta)?,
        rational_field("link_rate", &p.link_rate)?,
    )?;
    let full_range_rate = rational_field("full_range_rate", &p.full_range_rate)?;
    let clustering = build_reuse_sets(&grid, p.cluster_size, &protocol, p.reuse)?;
    let library = NetworkParams::new(p.users, p.files, rational_field("cache", &p.cache)?)?;
    let q = library.memory_ratio();
    let q_int = crate::model::as_integer(&q)
        .and_then(|v| v.to_u32())
        .ok_or_else(|| Error::InvalidParams(format!("m/M = {} is not an integer", format_rational(&q))))?;
    if p.cluster_size % q_int as usize != 0 {
        return Err(Error::InvalidParams(format!(
            "t_c = g_c·M/m = {}/{q_int} is not an integer",
            p.cluster_size
        )));
    }
    let tc = (p.cluster_size / q_int as usize) as u32;
    if tc < 2 || (q_int - 1) % (tc - 1) != 0 {
        return Err(Error::InvalidParams(format!(
            "c(t_c-1) = m/M-1 has no integer solution for m/M={q_int}, t_c={tc}"
        )));
    }
    let cluster_params = HypercubeParams::new(q_int, tc, (q_int - 1) / (tc - 1))?;
    let clustered = clustered_throughput_hc(&cluster_params, &protocol.link_rate, clustering.reuse_factor);
    let mut out = Outcome {
        packetization: Some(clustered.packetization.to_string()),
        rate: Some(clustered.cluster_rate.clone()),
        throughput: Some(clustered.throughput.clone()),
        uncoded: Some(uncoded_rate(&library)),
        ..Outcome::default()
    };
    out.details.insert("clustering".into(), serde_json::to_value(&clustering)?);
    out.details.insert(
        "throughput_via_rate".into(),
        exact(&clustered.via_rate),
    );
    out.details.insert(
        "packetization_reduction".into(),
        exact(&packetization_reduction(q_int, p.users, p.cluster_size)?),
    );
    if let Ok(gaps) = hc_gaps(
        p.users,
        p.cluster_size,
        &q,
        &protocol.link_rate,
        &full_range_rate,
        clustering.reuse_factor,
    ) {
        out.details.insert("gaps".into(), serde_json::to_value(&gaps)?);
    }
    if config.verify {
        let runs = clustered_hc_delivery(&clustering, &library, &DemandVector::identity(p.users))?;
        let all_recover = runs.iter().all(|r| r.verdicts.passed() && r.verdicts.exactly_once);
        let rates_match = runs.iter().all(|r| r.rate == clustered.cluster_rate);
        out.verification = Some(Verification {
            passed: all_recover && rates_match && clustering.feasible && clustered.throughput == clustered.via_rate,
            checks: json!({
                "reuse_sets_feasible": clustering.feasible,
                "clusters_recover": all_recover,
                "cluster_rates_match": rates_match,
                "throughput_identity": clustered.throughput == clustered.via_rate,
                "clusters": runs,
            }),
            recovery: None,
        });
    }
    Ok(out)
}
