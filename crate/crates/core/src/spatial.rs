//! Grid networks under the protocol model, clustering and spatial reuse.
//!
//! Users sit on a `side × side` grid with spacing `1/side` on the unit
//! square. Positions are kept as integer grid coordinates, so a squared
//! distance is an integer number of `1/n` units and every protocol-model
//! comparison is exact.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypercube::{generalized_rate, hc_delivery, hc_placement, HypercubeParams};
use crate::model::{int, ratio, serialize_rational, DemandVector, NetworkParams, Rational};
use crate::verify::{verify_all, Verdicts};

/// `n = side²` users in row-major order; user `u` sits at
/// `(u mod side, ⌊u/side⌋) / side`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridNetwork {
    side: usize,
}

impl GridNetwork {
    pub fn new(side: usize) -> Result<Self> {
        if side == 0 {
            return Err(Error::InvalidParams("grid side must be positive".into()));
        }
        Ok(Self { side })
    }

    /// Grid for `n` users; `n` must be a perfect square.
    pub fn with_users(users: usize) -> Result<Self> {
        let side = users.sqrt();
        if side * side != users {
            return Err(Error::InvalidParams(format!("{users} users do not form a square grid")));
        }
        Self::new(side)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn users(&self) -> usize {
        self.side * self.side
    }

    /// `(row, col)` grid coordinates.
    pub fn coords(&self, user: usize) -> (usize, usize) {
        (user / self.side, user % self.side)
    }

    pub fn user_at(&self, row: usize, col: usize) -> usize {
        row * self.side + col
    }

    /// Squared distance in units of `1/n`.
    pub fn dist_sq_units(&self, a: usize, b: usize) -> u64 {
        let (ra, ca) = self.coords(a);
        let (rb, cb) = self.coords(b);
        let dr = ra.abs_diff(rb) as u64;
        let dc = ca.abs_diff(cb) as u64;
        dr * dr + dc * dc
    }

    /// Exact squared Euclidean distance on the unit square.
    pub fn dist_sq(&self, a: usize, b: usize) -> Rational {
        ratio(self.dist_sq_units(a, b) as i64, self.users() as i64)
    }
}

/// Transmission range, guard zone and link rate of the protocol model.
/// The range is stored squared so that ranges such as `√2/9` stay exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProtocolParams {
    #[serde(serialize_with = "serialize_rational")]
    pub range_sq: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub delta: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub link_rate: Rational,
}

impl ProtocolParams {
    pub fn new(range_sq: Rational, delta: Rational, link_rate: Rational) -> Result<Self> {
        for (name, v) in [("r²", &range_sq), ("Δ", &delta), ("C_r", &link_rate)] {
            if !v.is_positive() {
                return Err(Error::InvalidParams(format!("{name} must be positive")));
            }
        }
        Ok(Self {
            range_sq,
            delta,
            link_rate,
        })
    }

    /// Range `r` given directly as a rational.
    pub fn with_range(range: Rational, delta: Rational, link_rate: Rational) -> Result<Self> {
        Self::new(&range * &range, delta, link_rate)
    }

    /// `(1+Δ)²r²`.
    pub fn guard_sq(&self) -> Rational {
        let g = Rational::one() + &self.delta;
        &g * &g * &self.range_sq
    }
}

/// Every receiver is within `r` of its transmitter and at least `(1+Δ)r`
/// away from every other active transmitter.
pub fn link_set_feasible(grid: &GridNetwork, protocol: &ProtocolParams, links: &[(usize, usize)]) -> bool {
    let n = int(grid.users());
    let range = &protocol.range_sq * &n;
    let guard = protocol.guard_sq() * &n;
    let transmitters: BTreeSet<usize> = links.iter().map(|&(tx, _)| tx).collect();
    links.iter().all(|&(tx, rx)| {
        int(grid.dist_sq_units(tx, rx)) <= range
            && transmitters
                .iter()
                .filter(|&&other| other != tx)
                .all(|&other| int(grid.dist_sq_units(other, rx)) >= guard)
    })
}

/// Smallest integer `k` with `k ≥ √2(1+Δ)`.
fn ceil_sqrt2_scaled(delta: &Rational) -> u64 {
    let target = {
        let g = Rational::one() + delta;
        int(2) * &g * &g
    };
    let mut k = target.to_f64().map_or(1, |v| v.sqrt().floor() as u64).max(1);
    while int(k * k) < target {
        k += 1;
    }
    while k > 1 && int((k - 1) * (k - 1)) >= target {
        k -= 1;
    }
    k
}

/// `𝒦 = (⌈√2(1+Δ)⌉ + 1)²`, computed exactly.
pub fn reuse_factor(delta: &Rational) -> u64 {
    let k = ceil_sqrt2_scaled(delta) + 1;
    k * k
}

/// One square cluster.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub id: usize,
    pub members: Vec<usize>,
    pub reuse_set: usize,
}

/// Square tiling of a grid plus the periodic reuse-set assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clustering {
    pub grid_side: usize,
    pub cluster_side: usize,
    /// `g_c`.
    pub cluster_size: usize,
    pub clusters: Vec<Cluster>,
    /// Reuse factor asked for (formula or override).
    pub requested_reuse: u64,
    /// Reuse factor in force; smaller than requested when the grid has fewer
    /// clusters per side than the reuse period.
    pub reuse_factor: u64,
    /// Whether every reuse set passes [`link_set_feasible`] with the
    /// designated transmitter of each cluster serving all its members.
    pub feasible: bool,
}

impl Clustering {
    pub fn clusters_per_side(&self) -> usize {
        self.grid_side / self.cluster_side
    }

    /// Cluster ids per reuse set, empty sets omitted.
    pub fn reuse_sets(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.reuse_factor as usize];
        for c in &self.clusters {
            sets[c.reuse_set].push(c.id);
        }
        sets.retain(|s| !s.is_empty());
        sets
    }

    /// Member closest to the cluster center (lowest index on ties).
    pub fn designated_transmitter(&self, cluster: usize) -> usize {
        let c = &self.clusters[cluster];
        let half = (self.cluster_side - 1) / 2;
        let (r0, c0) = (c.members[0] / self.grid_side, c.members[0] % self.grid_side);
        (r0 + half) * self.grid_side + c0 + half
    }

    /// Checks every reuse set with a caller-chosen transmitter per cluster.
    pub fn reuse_sets_feasible(
        &self,
        grid: &GridNetwork,
        protocol: &ProtocolParams,
        transmitter: impl Fn(usize) -> usize,
    ) -> bool {
        self.reuse_sets().iter().all(|set| {
            let links: Vec<(usize, usize)> = set
                .iter()
                .flat_map(|&cid| {
                    let tx = transmitter(cid);
                    self.clusters[cid]
                        .members
                        .iter()
                        .filter(move |&&u| u != tx)
                        .map(move |&u| (tx, u))
                })
                .collect();
            link_set_feasible(grid, protocol, &links)
        })
    }
}

/// Tiles the grid into square clusters of `cluster_size` users and assigns
/// cluster `(row, col)` to reuse set `(row mod k)·k + (col mod k)` with
/// `k = √𝒦`. `𝒦` defaults to [`reuse_factor`]; an override must be a perfect
/// square.
pub fn build_reuse_sets(
    grid: &GridNetwork,
    cluster_size: usize,
    protocol: &ProtocolParams,
    reuse_override: Option<u64>,
) -> Result<Clustering> {
    let cs = cluster_size.sqrt();
    if cluster_size == 0 || cs * cs != cluster_size || grid.side() % cs != 0 {
        return Err(Error::InvalidParams(format!(
            "g_c={cluster_size} does not tile a {0}×{0} grid with square clusters",
            grid.side()
        )));
    }
    let requested = reuse_override.unwrap_or_else(|| reuse_factor(&protocol.delta));
    let k = requested.sqrt();
    if k == 0 || k * k != requested {
        return Err(Error::InvalidParams(format!(
            "reuse factor {requested} is not a positive perfect square"
        )));
    }
    let per_side = grid.side() / cs;
    let k = (k as usize).min(per_side);
    let mut clusters = Vec::with_capacity(per_side * per_side);
    for cr in 0..per_side {
        for cc in 0..per_side {
            let members = (0..cs)
                .flat_map(|dr| (0..cs).map(move |dc| (cr * cs + dr, cc * cs + dc)))
                .map(|(r, c)| grid.user_at(r, c))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            clusters.push(Cluster {
                id: cr * per_side + cc,
                members,
                reuse_set: (cr % k) * k + (cc % k),
            });
        }
    }
    let mut clustering = Clustering {
        grid_side: grid.side(),
        cluster_side: cs,
        cluster_size,
        clusters,
        requested_reuse: requested,
        reuse_factor: (k * k) as u64,
        feasible: false,
    };
    clustering.feasible =
        clustering.reuse_sets_feasible(grid, protocol, |c| clustering.designated_transmitter(c));
    Ok(clustering)
}

/// Clustered hypercube throughput and packetization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusteredHc {
    /// `C_r/𝒦 · M/(m-M) · (t_c-1)/t_c`.
    #[serde(serialize_with = "serialize_rational")]
    pub throughput: Rational,
    /// `C_r/(𝒦·R_c)` with `R_c = t_c/(t_c-1)·q·(1-1/q)`.
    #[serde(serialize_with = "serialize_rational")]
    pub via_rate: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub cluster_rate: Rational,
    /// `K_c = q^{t_c}`.
    #[serde(serialize_with = "crate::model::serialize_biguint")]
    pub packetization: BigUint,
}

pub fn clustered_throughput_hc(cluster: &HypercubeParams, link_rate: &Rational, reuse: u64) -> ClusteredHc {
    let q = int(cluster.q());
    let t = int(cluster.t());
    let scale = link_rate / int(reuse);
    let throughput = &scale / (&q - Rational::one()) * (&t - Rational::one()) / &t;
    let cluster_rate = generalized_rate(&t, &q);
    ClusteredHc {
        via_rate: &scale / &cluster_rate,
        throughput,
        cluster_rate,
        packetization: cluster.packetization(),
    }
}

/// `K_g/K_c = q^{n/q} / q^{g_c/q}` by direct division.
pub fn packetization_reduction(q: u32, users: usize, cluster_size: usize) -> Result<Rational> {
    let qs = q as usize;
    if users % qs != 0 || cluster_size % qs != 0 {
        return Err(Error::InvalidParams(format!(
            "n={users} and g_c={cluster_size} must both be multiples of q={q}"
        )));
    }
    let base = BigInt::from(q);
    Ok(Rational::new(
        base.pow((users / qs) as u32),
        base.pow((cluster_size / qs) as u32),
    ))
}

/// `C_r/𝒦 · g_c/τ · (2γ-1)/(2γ)`.
pub fn clustered_throughput_rs(tau: usize, gamma: usize, cluster_size: usize, link_rate: &Rational, reuse: u64) -> Rational {
    link_rate / int(reuse) * ratio(cluster_size as i64, tau as i64)
        * ratio(2 * gamma as i64 - 1, 2 * gamma as i64)
}

/// Rate and throughput gaps of clustered hypercube delivery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HcGaps {
    /// `G_R = R_c/R_g = (g_c/n)·(t-1)/(t_c-1)`.
    #[serde(serialize_with = "serialize_rational")]
    pub rate_gap: Rational,
    /// `G_T = C_r/(C_√2·𝒦) / G_R`.
    #[serde(serialize_with = "serialize_rational")]
    pub throughput_gap: Rational,
    /// `G_T > 1`.
    pub clustering_helps: bool,
}

/// `t = nM/m` and `t_c = g_c M/m` are derived from `q = m/M`; both must
/// exceed one.
pub fn hc_gaps(
    users: usize,
    cluster_size: usize,
    q: &Rational,
    link_rate: &Rational,
    full_range_rate: &Rational,
    reuse: u64,
) -> Result<HcGaps> {
    let t = int(users) / q;
    let tc = int(cluster_size) / q;
    if t <= Rational::one() || tc <= Rational::one() {
        return Err(Error::InvalidParams("hypercube gaps need t > 1 and t_c > 1".into()));
    }
    let one = Rational::one();
    let rate_gap = ratio(cluster_size as i64, users as i64) * (&t - &one) / (&tc - &one);
    let throughput_gap = link_rate / (full_range_rate * int(reuse)) / &rate_gap;
    Ok(HcGaps {
        clustering_helps: throughput_gap > one,
        rate_gap,
        throughput_gap,
    })
}

/// Leading terms of the RS gaps (the `o(·)` corrections are dropped).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RsGaps {
    pub rate_gap: f64,
    pub throughput_gap: f64,
    /// `M(g_c)/M(n)`; for the `z` route this is `exp((z-z')/(2Λ⁴))`.
    pub memory_ratio: f64,
}

/// Cluster size `Λ^{z'}` inside a network of `Λ^z` users.
pub fn rs_gaps_by_z(lambda: f64, z: f64, z_cluster: f64, link_ratio: f64, reuse: f64) -> Result<RsGaps> {
    if z_cluster >= z {
        return Err(Error::InvalidParams(format!("need z' < z, got z'={z_cluster}, z={z}")));
    }
    Ok(RsGaps {
        rate_gap: 10.5f64.powf(2.0 * (z_cluster - z)),
        throughput_gap: link_ratio / reuse * 10.5f64.powf(2.0 * (z - z_cluster)),
        memory_ratio: ((z - z_cluster) / (2.0 * lambda.powi(4))).exp(),
    })
}

/// Cluster size `Λ'^z` inside a network of `Λ^z` users.
pub fn rs_gaps_by_lambda(lambda: f64, lambda_cluster: f64, z: f64, link_ratio: f64, reuse: f64) -> Result<RsGaps> {
    if lambda_cluster >= lambda || lambda_cluster < 2.0 {
        return Err(Error::InvalidParams(format!(
            "need 2 ≤ Λ' < Λ, got Λ'={lambda_cluster}, Λ={lambda}"
        )));
    }
    let delta = |l: f64| 2.0 * 10.5f64.ln() / l.ln();
    let rate_gap = lambda_cluster.powf(delta(lambda_cluster) * z) / lambda.powf(delta(lambda) * z);
    let m = |l: f64, n: f64| n.powf(-1.0 / (2.0 * l.powi(4) * l.ln()));
    Ok(RsGaps {
        rate_gap,
        throughput_gap: link_ratio / reuse,
        memory_ratio: m(lambda, lambda_cluster.powf(z)) / m(lambda, lambda.powf(z)),
    })
}

/// `M(g) = 2m·g^{-1/(2Λ⁴ ln Λ)}`.
pub fn rs_memory_requirement(lambda: f64, files: f64, cluster_users: f64) -> f64 {
    2.0 * files * cluster_users.powf(-1.0 / (2.0 * lambda.powi(4) * lambda.ln()))
}

/// Outcome of running the hypercube scheme inside every cluster.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterRun {
    pub cluster: usize,
    pub verdicts: Verdicts,
    #[serde(serialize_with = "serialize_rational")]
    pub rate: Rational,
}

/// Per-cluster hypercube placement + delivery, each verified on its own.
/// Cluster users keep their global demands (file indices into the shared
/// library), so the demand vector restricted to a cluster must be distinct.
pub fn clustered_hc_delivery(
    clustering: &Clustering,
    library: &NetworkParams,
    demands: &DemandVector,
) -> Result<Vec<ClusterRun>> {
    let g = clustering.cluster_size;
    let q = library.memory_ratio();
    let q = crate::model::as_integer(&q)
        .and_then(|v| v.to_u32())
        .ok_or_else(|| Error::InvalidParams("m/M must be an integer".into()))?;
    if g % q as usize != 0 {
        return Err(Error::InvalidParams(format!("t_c = g_c·M/m = {g}/{q} is not an integer")));
    }
    let tc = (g / q as usize) as u32;
    if tc < 2 || (q - 1) % (tc - 1) != 0 {
        return Err(Error::InvalidParams(format!(
            "c(t_c-1) = q-1 has no integer solution for q={q}, t_c={tc}"
        )));
    }
    let params = HypercubeParams::new(q, tc, (q - 1) / (tc - 1))?;
    let local_lib = NetworkParams::new(g, library.files(), library.cache().clone())?;
    let cache = hc_placement(&params, &local_lib)?;
    clustering
        .clusters
        .iter()
        .map(|c| {
            let local = demands.restrict(&c.members);
            DemandVector::new(local.as_slice().to_vec(), library.files(), true)?;
            let schedule = hc_delivery(&params, &local)?;
            let (verdicts, _) = verify_all(&cache, &schedule, &local, &local_lib)?;
            Ok(ClusterRun {
                cluster: c.id,
                verdicts,
                rate: crate::model::measured_rate(&schedule),
            })
        })
        .collect()
}
