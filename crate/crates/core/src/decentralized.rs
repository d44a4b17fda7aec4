//! Decentralized hypercube caching.
//!
//! Each of `n` users caches one of `n' = t'q` packet sets `Z[i][j]` (all
//! lattice points whose coordinate `i` equals `j`) chosen uniformly at random.
//! Delivery runs in rounds: with `x` the smallest nonzero set count, `x`
//! disjoint instances of the centralized `t'`-dimensional delivery are run,
//! depleted sets being represented by already satisfied stand-ins. Groups made
//! of stand-ins only are skipped.
//!
//! Also hosts the balls-into-bins calculators that bound the worst set load.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypercube::{emit_group, generalized_rate, lattice_points, HypercubeParams};
use crate::model::{
    format_float, int, ratio, serialize_biguint, serialize_rational, to_f64, CacheAssignment,
    DeliverySchedule, DemandVector, GroupLabel, Locator, NetworkParams, Rational,
};

/// Network of `users` devices served through a `t'`-dimensional lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DecentralizedParams {
    users: usize,
    lattice: HypercubeParams,
}

impl DecentralizedParams {
    /// `c = (q-1)/(t'-1)` must be a positive integer.
    pub fn new(users: usize, q: u32, t_prime: u32) -> Result<Self> {
        if users == 0 {
            return Err(Error::InvalidParams("decentralized network needs n ≥ 1".into()));
        }
        if t_prime < 2 {
            return Err(Error::InvalidParams(format!("t' must be ≥ 2, got {t_prime}")));
        }
        if q < 2 || (q - 1) % (t_prime - 1) != 0 {
            return Err(Error::InvalidParams(format!(
                "c(t'-1) = q-1 has no integer solution for q={q}, t'={t_prime}"
            )));
        }
        let lattice = HypercubeParams::new(q, t_prime, (q - 1) / (t_prime - 1))?;
        Ok(Self { users, lattice })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn q(&self) -> u32 {
        self.lattice.q()
    }

    pub fn t_prime(&self) -> u32 {
        self.lattice.t()
    }

    pub fn c(&self) -> u32 {
        self.lattice.c()
    }

    /// `n' = t'q`, the number of packet sets.
    pub fn n_prime(&self) -> usize {
        self.lattice.users()
    }

    /// `K' = q^{t'}`.
    pub fn packetization(&self) -> BigUint {
        self.lattice.packetization()
    }

    pub fn lattice(&self) -> &HypercubeParams {
        &self.lattice
    }

    /// Rate of one centralized instance, `c·t'`.
    pub fn instance_rate(&self) -> Rational {
        int(self.c() * self.t_prime())
    }

    /// Library with `files` files and `M = files/q`.
    pub fn library(&self, files: usize) -> Result<NetworkParams> {
        NetworkParams::new(self.users, files, ratio(files as i64, self.q() as i64))
    }

    fn set_index(&self, set: PacketSetId) -> usize {
        set.row as usize * self.q() as usize + set.col as usize
    }

    fn set_at(&self, index: usize) -> PacketSetId {
        let q = self.q() as usize;
        PacketSetId {
            row: (index / q) as u32,
            col: (index % q) as u32,
        }
    }
}

/// Packet set `Z[row][col]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PacketSetId {
    pub row: u32,
    pub col: u32,
}

/// Set occupancy matrix `X` plus the set chosen by each user.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlacementCounts {
    counts: Vec<Vec<usize>>,
    choices: Vec<PacketSetId>,
}

impl PlacementCounts {
    pub fn from_choices(params: &DecentralizedParams, choices: Vec<PacketSetId>) -> Result<Self> {
        if choices.len() != params.users() {
            return Err(Error::InvalidParams(format!(
                "{} set choices for {} users",
                choices.len(),
                params.users()
            )));
        }
        let mut counts = vec![vec![0usize; params.q() as usize]; params.t_prime() as usize];
        for set in &choices {
            if set.row >= params.t_prime() || set.col >= params.q() {
                return Err(Error::InvalidParams(format!(
                    "packet set Z[{},{}] outside the {}×{} grid",
                    set.row,
                    set.col,
                    params.t_prime(),
                    params.q()
                )));
            }
            counts[set.row as usize][set.col as usize] += 1;
        }
        Ok(Self { counts, choices })
    }

    /// Assigns users to sets in row-major order: the first `x[0][0]` users
    /// take `Z[0][0]`, the next `x[0][1]` take `Z[0][1]`, and so on.
    pub fn from_counts(params: &DecentralizedParams, counts: &[Vec<usize>]) -> Result<Self> {
        let shape_ok = counts.len() == params.t_prime() as usize
            && counts.iter().all(|row| row.len() == params.q() as usize);
        if !shape_ok {
            return Err(Error::InvalidParams(format!(
                "count matrix must be {}×{}",
                params.t_prime(),
                params.q()
            )));
        }
        let mut choices = Vec::with_capacity(params.users());
        for (row, values) in counts.iter().enumerate() {
            for (col, &x) in values.iter().enumerate() {
                let set = PacketSetId {
                    row: row as u32,
                    col: col as u32,
                };
                choices.extend(std::iter::repeat_n(set, x));
            }
        }
        Self::from_choices(params, choices)
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn choices(&self) -> &[PacketSetId] {
        &self.choices
    }

    pub fn total(&self) -> usize {
        self.choices.len()
    }

    pub fn max_load(&self) -> usize {
        self.counts.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn first_empty(&self) -> Option<PacketSetId> {
        self.counts.iter().enumerate().find_map(|(row, values)| {
            values.iter().position(|&x| x == 0).map(|col| PacketSetId {
                row: row as u32,
                col: col as u32,
            })
        })
    }
}

/// Uniform random set choice per user, deterministic in `seed`.
pub fn dec_place(params: &DecentralizedParams, seed: u64) -> PlacementCounts {
    dec_place_with(params, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn dec_place_with<R: Rng>(params: &DecentralizedParams, rng: &mut R) -> PlacementCounts {
    let n_prime = params.n_prime();
    let choices = (0..params.users())
        .map(|_| params.set_at(rng.random_range(0..n_prime)))
        .collect();
    PlacementCounts::from_choices(params, choices).expect("sampled sets are in range")
}

/// One delivery round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    /// Smallest nonzero count `x`, i.e. number of instances in the round.
    pub multiplier: usize,
    /// `X_i^*`, zero entries per row at the start of the round.
    pub zero_counts: Vec<usize>,
    /// `∏_i X_i^*` groups made of stand-ins only.
    #[serde(serialize_with = "serialize_biguint")]
    pub skipped_groups: BigUint,
    /// Users served for the first time in this round, ascending.
    pub satisfied_users: Vec<usize>,
    /// `x·(K' - ∏X_i^*)·c·t'/K'`.
    #[serde(serialize_with = "serialize_rational")]
    pub rate: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundLog {
    pub rounds: Vec<RoundRecord>,
    #[serde(serialize_with = "serialize_rational")]
    pub total_rate: Rational,
}

impl RoundLog {
    pub fn multipliers(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.multiplier).collect()
    }

    pub fn skipped(&self) -> Vec<BigUint> {
        self.rounds.iter().map(|r| r.skipped_groups.clone()).collect()
    }
}

/// Per-round bookkeeping shared by the rate-only and the full delivery.
struct RoundPlan {
    multiplier: usize,
    zero: Vec<Vec<bool>>,
}

fn check_covered(counts: &PlacementCounts) -> Result<()> {
    match counts.first_empty() {
        Some(set) => Err(Error::UncachedPacketSet {
            row: set.row as usize,
            col: set.col as usize,
        }),
        None => Ok(()),
    }
}

fn plan_rounds(counts: &PlacementCounts) -> Vec<RoundPlan> {
    let mut x: Vec<Vec<usize>> = counts.counts().to_vec();
    let mut plans = Vec::new();
    while let Some(min) = x.iter().flatten().copied().filter(|&v| v > 0).min() {
        let zero = x
            .iter()
            .map(|row| row.iter().map(|&v| v == 0).collect())
            .collect();
        for v in x.iter_mut().flatten() {
            *v = v.saturating_sub(min);
        }
        plans.push(RoundPlan {
            multiplier: min,
            zero,
        });
    }
    plans
}

fn round_record(params: &DecentralizedParams, plan: &RoundPlan, satisfied: Vec<usize>) -> RoundRecord {
    let zero_counts: Vec<usize> = plan
        .zero
        .iter()
        .map(|row| row.iter().filter(|&&z| z).count())
        .collect();
    let skipped: BigUint = zero_counts.iter().map(|&z| BigUint::from(z)).product();
    let k = params.packetization();
    let active = &k - &skipped;
    let rate = Rational::new(
        (BigUint::from(plan.multiplier) * active).into(),
        k.into(),
    ) * params.instance_rate();
    RoundRecord {
        multiplier: plan.multiplier,
        zero_counts,
        skipped_groups: skipped,
        satisfied_users: satisfied,
        rate,
    }
}

/// Round log and exact rate without building the schedule. Works for any
/// `K'`, including lattices too large to enumerate.
pub fn dec_rounds(params: &DecentralizedParams, counts: &PlacementCounts) -> Result<RoundLog> {
    check_covered(counts)?;
    let mut queues = set_queues(params, counts);
    let mut rounds = Vec::new();
    let mut total_rate = Rational::zero();
    for plan in plan_rounds(counts) {
        let mut satisfied: Vec<usize> = queues
            .iter_mut()
            .flat_map(|q| {
                let take = plan.multiplier.min(q.len());
                q.drain(..take).collect::<Vec<_>>()
            })
            .collect();
        satisfied.sort_unstable();
        let record = round_record(params, &plan, satisfied);
        total_rate += &record.rate;
        rounds.push(record);
    }
    Ok(RoundLog { rounds, total_rate })
}

fn set_queues(params: &DecentralizedParams, counts: &PlacementCounts) -> Vec<VecDeque<usize>> {
    let mut queues = vec![VecDeque::new(); params.n_prime()];
    for (user, &set) in counts.choices().iter().enumerate() {
        queues[params.set_index(set)].push_back(user);
    }
    queues
}

/// Packet-set cache placement for a library of `library.files()` files.
pub fn dec_cache_assignment(
    params: &DecentralizedParams,
    counts: &PlacementCounts,
    library: &NetworkParams,
) -> Result<CacheAssignment> {
    if library.users() != params.users() || library.memory_ratio() != int(params.q()) {
        return Err(Error::InvalidParams(format!(
            "library (n={}, m/M={}) does not match n={}, q={}",
            library.users(),
            crate::model::format_rational(&library.memory_ratio()),
            params.users(),
            params.q()
        )));
    }
    params.lattice.enumerable_packetization()?;
    let points: Vec<Vec<u32>> = lattice_points(params.q(), params.t_prime()).collect();
    let per_user = counts
        .choices()
        .iter()
        .map(|set| {
            points
                .iter()
                .filter(|p| p[set.row as usize] == set.col)
                .map(|p| Locator::Lattice(p.clone()))
                .collect()
        })
        .collect();
    let locators = points.into_iter().map(Locator::Lattice).collect();
    Ok(CacheAssignment::uniform(library, locators, per_user, true))
}

/// Full round-based delivery.
///
/// In every instance each nonzero set contributes its next unsatisfied user
/// (ascending index); each depleted set is represented by the lowest-index
/// user that chose it, who was satisfied in an earlier round. Stand-ins keep
/// their own demand, so packets addressed to them are repeats of what they
/// already decoded and add no new information.
pub fn dec_delivery(
    params: &DecentralizedParams,
    counts: &PlacementCounts,
    demands: &DemandVector,
) -> Result<(RoundLog, DeliverySchedule)> {
    if demands.len() != params.users() {
        return Err(Error::DemandLength {
            expected: params.users(),
            got: demands.len(),
        });
    }
    check_covered(counts)?;
    let k = params.lattice.enumerable_packetization()?;
    let q = params.q() as usize;
    let t = params.t_prime() as usize;
    let mut queues = set_queues(params, counts);
    let stand_in: Vec<usize> = queues.iter().map(|q| q[0]).collect();
    let points: Vec<Vec<u32>> = lattice_points(params.q(), params.t_prime()).collect();

    let mut schedule = DeliverySchedule::new(k);
    let mut rounds = Vec::new();
    let mut total_rate = Rational::zero();
    for (round, plan) in plan_rounds(counts).into_iter().enumerate() {
        let mut satisfied = Vec::new();
        for instance in 0..plan.multiplier {
            let assigned: Vec<usize> = (0..t * q)
                .map(|s| {
                    if plan.zero[s / q][s % q] {
                        stand_in[s]
                    } else {
                        let user = queues[s].pop_front().expect("nonzero set has a user");
                        satisfied.push(user);
                        user
                    }
                })
                .collect();
            for (g, point) in points.iter().enumerate() {
                if point.iter().enumerate().all(|(i, &l)| plan.zero[i][l as usize]) {
                    continue;
                }
                let members: Vec<usize> = point
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| assigned[i * q + l as usize])
                    .collect();
                emit_group(
                    &params.lattice,
                    point,
                    &members,
                    demands.as_slice(),
                    &mut schedule,
                    |pass| GroupLabel::Decentralized {
                        round,
                        instance,
                        group: g as u64,
                        pass,
                    },
                )?;
            }
        }
        satisfied.sort_unstable();
        let record = round_record(params, &plan, satisfied);
        total_rate += &record.rate;
        rounds.push(record);
    }
    Ok((RoundLog { rounds, total_rate }, schedule))
}

/// Sample statistics of the decentralized rate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McStats {
    pub trials: usize,
    /// Mean over trials with every packet set cached.
    pub mean: f64,
    /// Sample standard deviation (`n-1` denominator), `0` for one sample.
    pub std: f64,
    /// Trials in which some packet set was not cached by anyone.
    pub violations: usize,
    pub max_load: usize,
}

/// Monte Carlo over random placements.
///
/// Trial `i` draws its placement from `ChaCha8Rng::seed_from_u64(seed)` with
/// stream `i`. Trials run in parallel; results are reduced in trial order.
pub fn dec_monte_carlo(params: &DecentralizedParams, trials: usize, seed: u64) -> Result<McStats> {
    if trials == 0 {
        return Err(Error::InvalidParams("Monte Carlo needs at least one trial".into()));
    }
    let outcomes: Vec<(Option<f64>, usize)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let counts = dec_place_with(params, &mut trial_rng(seed, trial));
            let rate = dec_rounds(params, &counts).ok().map(|log| to_f64(&log.total_rate));
            (rate, counts.max_load())
        })
        .collect();
    let rates: Vec<f64> = outcomes.iter().filter_map(|(r, _)| *r).collect();
    let (mean, std) = mean_std(&rates);
    Ok(McStats {
        trials,
        mean,
        std,
        violations: trials - rates.len(),
        max_load: outcomes.iter().map(|(_, l)| *l).max().unwrap_or(0),
    })
}

pub(crate) fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Rate `t/(t-1)·q·(1-1/q)` of the centralized scheme with `t = n/q`,
/// evaluated at the (possibly fractional) replication of `n` users.
pub fn centralized_rate(users: usize, q: u32) -> Rational {
    generalized_rate(&ratio(users as i64, q as i64), &int(q))
}

/// `n(1 - 1/q)`.
pub fn uncoded_rate_for(users: usize, q: u32) -> Rational {
    int(users) * (Rational::from_integer(1.into()) - ratio(1, q as i64))
}

/// All `(q, t')` with `t' ∈ t_primes`, `n' = t'q ≤ max_sets` and integral `c`,
/// ordered by `t'` then `q`.
pub fn valid_points(users: usize, max_sets: usize, t_primes: &[u32]) -> Vec<DecentralizedParams> {
    let mut out = Vec::new();
    for &t in t_primes {
        for q in 2..=(max_sets as u32 / t.max(1)) {
            if let Ok(p) = DecentralizedParams::new(users, q, t) {
                if p.n_prime() <= max_sets {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// One point of a rate-vs-packetization sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub n_prime: usize,
    pub t_prime: u32,
    pub q: u32,
    pub c: u32,
    #[serde(serialize_with = "serialize_biguint")]
    pub k_prime: BigUint,
    pub mean: f64,
    pub std: f64,
    pub violations: usize,
    pub centralized_rate: f64,
    pub uncoded_rate: f64,
}

pub fn sweep(points: &[DecentralizedParams], trials: usize, seed: u64) -> Result<Vec<SweepRow>> {
    points
        .iter()
        .map(|p| {
            let stats = dec_monte_carlo(p, trials, seed)?;
            Ok(SweepRow {
                n: p.users(),
                n_prime: p.n_prime(),
                t_prime: p.t_prime(),
                q: p.q(),
                c: p.c(),
                k_prime: p.packetization(),
                mean: stats.mean,
                std: stats.std,
                violations: stats.violations,
                centralized_rate: to_f64(&centralized_rate(p.users(), p.q())),
                uncoded_rate: to_f64(&uncoded_rate_for(p.users(), p.q())),
            })
        })
        .collect()
}

/// Writes `n,n_prime,t_prime,k_prime,mean,std,centralized_rate,uncoded_rate`.
pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "n_prime",
        "t_prime",
        "k_prime",
        "mean",
        "std",
        "centralized_rate",
        "uncoded_rate",
    ])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.n_prime.to_string(),
            r.t_prime.to_string(),
            r.k_prime.to_string(),
            format_float(r.mean),
            format_float(r.std),
            format_float(r.centralized_rate),
            format_float(r.uncoded_rate),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Branch of the maximum-load estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum LoadRegime {
    /// `n = β n' ln n'`; `d_beta` has no closed form and must be supplied.
    Sparse { d_beta: Option<f64> },
    /// `n' ln n' ≪ n ≤ n·polylog(n)`.
    Mid,
    Dense,
}

/// Bin-load threshold `k_α` (natural logarithms). The rate bound is
/// `k_α · R_g` with `R_g` the per-instance rate.
pub fn max_load_bound(n: f64, n_prime: f64, alpha: f64, beta: f64, regime: LoadRegime) -> Result<f64> {
    if alpha <= 1.0 || beta <= 1.0 {
        return Err(Error::InvalidParams(format!(
            "need α > 1 and β > 1, got α={alpha}, β={beta}"
        )));
    }
    if n_prime < 2.0 || n <= 0.0 {
        return Err(Error::InvalidParams(format!("need n > 0 and n' ≥ 2, got n={n}, n'={n_prime}")));
    }
    let ln = n_prime.ln();
    let mean = n / n_prime;
    Ok(match regime {
        LoadRegime::Sparse { d_beta } => {
            let d = d_beta.ok_or_else(|| {
                Error::InvalidParams("sparse regime needs d_beta".into())
            })?;
            (d - 1.0 + alpha) * ln
        }
        LoadRegime::Mid => mean + alpha * (2.0 * mean * ln).sqrt(),
        LoadRegime::Dense => {
            mean + (2.0 * n * ln / n_prime).sqrt() * (1.0 - ln.ln() / (2.0 * alpha * ln))
        }
    })
}

/// `1 - n'^{1-β}`, valid when `n ≥ β n' ln n'`.
pub fn coverage_probability(n: f64, n_prime: f64, beta: f64) -> Result<f64> {
    if beta <= 1.0 || n_prime < 2.0 {
        return Err(Error::InvalidParams(format!("need β > 1 and n' ≥ 2, got β={beta}, n'={n_prime}")));
    }
    let need = beta * n_prime * n_prime.ln();
    if n < need {
        return Err(Error::InvalidParams(format!(
            "n={n} below β n' ln n' = {need:.3}"
        )));
    }
    Ok(1.0 - n_prime.powf(1.0 - beta))
}

/// Outcome of one balls-into-bins throw.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BinTrial {
    pub max_load: usize,
    pub covered: bool,
}

/// Throws `balls` balls into `bins` bins uniformly, `trials` times, with the
/// same per-trial seeding as [`dec_monte_carlo`].
pub fn simulate_bins(balls: usize, bins: usize, trials: usize, seed: u64) -> Vec<BinTrial> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let mut load = vec![0usize; bins];
            for _ in 0..balls {
                load[rng.random_range(0..bins)] += 1;
            }
            BinTrial {
                max_load: load.iter().copied().max().unwrap_or(0),
                covered: load.iter().all(|&l| l > 0),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::measured_rate;
    use num_traits::ToPrimitive;
    use crate::verify::{verify_all, DecodeMode};

    fn fixture() -> (DecentralizedParams, PlacementCounts) {
        let p = DecentralizedParams::new(32, 3, 2).unwrap();
        let counts = PlacementCounts::from_counts(&p, &[vec![6, 3, 6], vec![7, 6, 4]]).unwrap();
        (p, counts)
    }

    #[test]
    fn fixture_rounds() {
        let (p, counts) = fixture();
        assert_eq!(p.c(), 2);
        assert_eq!(p.instance_rate(), int(4));
        let log = dec_rounds(&p, &counts).unwrap();
        assert_eq!(log.multipliers(), vec![3, 1, 2, 1]);
        let skipped: Vec<u64> = log.skipped().iter().map(|b| b.to_u64().unwrap()).collect();
        assert_eq!(skipped, vec![0, 0, 1, 6]);
        assert_eq!(log.total_rate, ratio(220, 9));
        let sizes: Vec<usize> = log.rounds.iter().map(|r| r.satisfied_users.len()).collect();
        assert_eq!(sizes, vec![18, 5, 8, 1]);
    }

    #[test]
    fn fixture_schedule_matches_log_and_decodes() {
        let (p, counts) = fixture();
        let lib = p.library(32).unwrap();
        let demands = DemandVector::identity(32);
        let (log, schedule) = dec_delivery(&p, &counts, &demands).unwrap();
        assert_eq!(measured_rate(&schedule), log.total_rate);
        assert_eq!(log, dec_rounds(&p, &counts).unwrap());
        let cache = dec_cache_assignment(&p, &counts, &lib).unwrap();
        let (v, report) = verify_all(&cache, &schedule, &demands, &lib).unwrap();
        assert!(v.passed(), "{v:?}");
        assert!(report.redundant > 0);
        let progressive = crate::verify::simulate_and_decode(&cache, &schedule, &demands, DecodeMode::Progressive).unwrap();
        assert!(progressive.full_recovery());
    }

    #[test]
    fn uniform_counts_take_one_round() {
        let p = DecentralizedParams::new(12, 3, 2).unwrap();
        let counts = PlacementCounts::from_counts(&p, &[vec![2, 2, 2], vec![2, 2, 2]]).unwrap();
        let log = dec_rounds(&p, &counts).unwrap();
        assert_eq!(log.rounds.len(), 1);
        assert_eq!(log.total_rate, int(2) * p.instance_rate());
    }

    #[test]
    fn uncached_set_is_an_error() {
        let p = DecentralizedParams::new(5, 3, 2).unwrap();
        let counts = PlacementCounts::from_counts(&p, &[vec![1, 1, 1], vec![1, 1, 0]]).unwrap();
        assert!(matches!(
            dec_rounds(&p, &counts),
            Err(Error::UncachedPacketSet { row: 1, col: 2 })
        ));
    }

    #[test]
    fn placement_is_seeded() {
        let p = DecentralizedParams::new(1000, 3, 2).unwrap();
        let a = dec_place(&p, 9);
        assert_eq!(a.total(), 1000);
        assert_eq!(a.counts().iter().flatten().sum::<usize>(), 1000);
        assert_eq!(a, dec_place(&p, 9));
        assert_ne!(a, dec_place(&p, 10));
    }

    #[test]
    fn one_user_per_set() {
        let p = DecentralizedParams::new(6, 3, 2).unwrap();
        let counts = PlacementCounts::from_counts(&p, &[vec![1; 3], vec![1; 3]]).unwrap();
        assert_eq!(dec_rounds(&p, &counts).unwrap().total_rate, p.instance_rate());
    }

    #[test]
    fn single_trial_has_zero_std() {
        let p = DecentralizedParams::new(200, 3, 2).unwrap();
        let s = dec_monte_carlo(&p, 1, 4).unwrap();
        assert_eq!(s.std, 0.0);
        assert_eq!(s.violations, 0);
        assert_eq!(s, dec_monte_carlo(&p, 1, 4).unwrap());
    }

    #[test]
    fn valid_points_for_thousand_users() {
        let pts = valid_points(1000, 64, &[3, 4]);
        let t3: Vec<u32> = pts.iter().filter(|p| p.t_prime() == 3).map(|p| p.q()).collect();
        let t4: Vec<u32> = pts.iter().filter(|p| p.t_prime() == 4).map(|p| p.q()).collect();
        assert_eq!(t3, vec![3, 5, 7, 9, 11, 13, 15, 17, 19, 21]);
        assert_eq!(t4, vec![4, 7, 10, 13, 16]);
    }

    #[test]
    fn load_bounds() {
        let mid = max_load_bound(600.0, 6.0, 2.0, 2.0, LoadRegime::Mid).unwrap();
        assert!((mid - (100.0 + 2.0 * (200.0 * 6f64.ln()).sqrt())).abs() < 1e-9);
        assert!(max_load_bound(600.0, 6.0, 2.0, 2.0, LoadRegime::Sparse { d_beta: None }).is_err());
        let sparse = max_load_bound(1.0, 6.0, 2.0, 2.0, LoadRegime::Sparse { d_beta: Some(3.0) }).unwrap();
        assert!((sparse - 4.0 * 6f64.ln()).abs() < 1e-12);
        assert!((coverage_probability(100.0, 10.0, 2.0).unwrap() - 0.9).abs() < 1e-12);
        assert!(coverage_probability(10.0, 10.0, 2.0).is_err());
    }
}
