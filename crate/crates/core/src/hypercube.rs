//! Centralized hypercube placement and coded delivery.
//!
//! Files are split into the `q^t` points of a `t`-dimensional lattice with
//! `q = m/M` points per dimension. User `u` owns dimension `⌊u/q⌋` and caches
//! the hyperplane where that coordinate equals `u mod q`. A multicast group
//! picks one user per dimension; each member sends `c` XOR messages, each one
//! carrying one packet for every other member.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    binomial, format_rational, int, ratio, serialize_biguint, serialize_rational, CacheAssignment,
    DeliverySchedule, DemandVector, GroupLabel, Locator, NetworkParams, PacketId, Rational,
};

/// Largest lattice this crate will enumerate packet by packet.
pub const ENUMERATION_CAP: u64 = 1 << 24;

/// Lattice geometry of a hypercube design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HypercubeParams {
    q: u32,
    t: u32,
    c: u32,
}

impl HypercubeParams {
    /// Requires `t ≥ 2`, `q ≥ 2` and the symmetric-group condition
    /// `c(t-1) = q-1`.
    pub fn new(q: u32, t: u32, c: u32) -> Result<Self> {
        if t < 2 {
            return Err(Error::InvalidParams(format!(
                "hypercube needs t ≥ 2 dimensions, got t={t}"
            )));
        }
        if q < 2 {
            return Err(Error::InvalidParams(format!("q = m/M must be ≥ 2, got {q}")));
        }
        if c == 0 || c as u64 * (t as u64 - 1) != q as u64 - 1 {
            return Err(Error::InvalidParams(format!(
                "c(t-1) = q-1 violated for q={q}, t={t}, c={c}"
            )));
        }
        Ok(Self { q, t, c })
    }

    /// `c = 1`, `t = q`, `n = q²`.
    pub fn symmetric(q: u32) -> Result<Self> {
        Self::new(q, q, 1)
    }

    /// Derives `t = (q-1)/c + 1`.
    pub fn with_multiplicity(q: u32, c: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("q = m/M must be ≥ 2, got {q}")));
        }
        if c == 0 || (q - 1) % c != 0 {
            return Err(Error::InvalidParams(format!(
                "c={c} does not divide q-1={}",
                q.saturating_sub(1)
            )));
        }
        Self::new(q, (q - 1) / c + 1, c)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    /// `n = t·q`.
    pub fn users(&self) -> usize {
        self.t as usize * self.q as usize
    }

    pub fn packetization(&self) -> BigUint {
        BigUint::from(self.q).pow(self.t)
    }

    /// `q^t` when it is small enough to enumerate.
    pub fn enumerable_packetization(&self) -> Result<u64> {
        let k = self.packetization();
        match k.to_u64() {
            Some(k) if k <= ENUMERATION_CAP => Ok(k),
            _ => Err(Error::TooLarge {
                what: "hypercube lattice",
                size: k.to_string(),
                cap: ENUMERATION_CAP,
            }),
        }
    }

    /// Library with `files` files and `M = files/q`.
    pub fn library(&self, files: usize) -> Result<NetworkParams> {
        NetworkParams::new(self.users(), files, ratio(files as i64, self.q as i64))
    }

    pub fn check_library(&self, library: &NetworkParams) -> Result<()> {
        if library.users() != self.users() {
            return Err(Error::InvalidParams(format!(
                "library has n={} users, lattice needs n=t·q={}",
                library.users(),
                self.users()
            )));
        }
        if library.memory_ratio() != int(self.q) {
            return Err(Error::InvalidParams(format!(
                "m/M = {} differs from q = {}",
                format_rational(&library.memory_ratio()),
                self.q
            )));
        }
        Ok(())
    }

    /// Dimension owned by user `u` and the coordinate value it caches.
    pub fn hyperplane(&self, user: usize) -> (usize, u32) {
        (user / self.q as usize, (user % self.q as usize) as u32)
    }

    /// Group members `u_j = j·q + ℓ_j` for a lattice point `ℓ`.
    pub fn group_members(&self, point: &[u32]) -> Vec<usize> {
        point
            .iter()
            .enumerate()
            .map(|(j, &l)| j * self.q as usize + l as usize)
            .collect()
    }

    /// Lattice coordinates of the packet that the member of dimension
    /// `sender` sends to the member of dimension `receiver` on pass `pass`.
    ///
    /// The receiver's coordinate is shifted by `δ + pass·(t-1)` with
    /// `δ = (receiver - sender) mod t`; the other coordinates stay at the
    /// group point. Over all senders and passes the shifts cover
    /// `1..=c(t-1) = 1..=q-1` exactly once.
    pub fn transmitted_point(&self, group: &[u32], sender: usize, receiver: usize, pass: u32) -> Vec<u32> {
        let t = self.t as usize;
        let delta = ((receiver + t - sender) % t) as u64;
        let shift = delta + pass as u64 * (self.t as u64 - 1);
        let mut point = group.to_vec();
        point[receiver] = ((group[receiver] as u64 + shift) % self.q as u64) as u32;
        point
    }
}

/// All points of `[0,q)^t` in lexicographic order.
pub fn lattice_points(q: u32, t: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (q as u64).pow(t);
    (0..total).map(move |mut index| {
        let mut point = vec![0u32; t as usize];
        for slot in point.iter_mut().rev() {
            *slot = (index % q as u64) as u32;
            index /= q as u64;
        }
        point
    })
}

/// Hyperplane cache placement.
pub fn hc_placement(params: &HypercubeParams, library: &NetworkParams) -> Result<CacheAssignment> {
    params.check_library(library)?;
    params.enumerable_packetization()?;
    let points: Vec<Vec<u32>> = lattice_points(params.q, params.t).collect();
    let per_user = (0..params.users())
        .map(|u| {
            let (dim, value) = params.hyperplane(u);
            points
                .iter()
                .filter(|p| p[dim] == value)
                .map(|p| Locator::Lattice(p.clone()))
                .collect()
        })
        .collect();
    let locators = points.into_iter().map(Locator::Lattice).collect();
    Ok(CacheAssignment::uniform(library, locators, per_user, true))
}

/// Coded delivery over every orthogonal group, in lexicographic group order.
pub fn hc_delivery(params: &HypercubeParams, demands: &DemandVector) -> Result<DeliverySchedule> {
    if demands.len() != params.users() {
        return Err(Error::DemandLength {
            expected: params.users(),
            got: demands.len(),
        });
    }
    let k = params.enumerable_packetization()?;
    let mut schedule = DeliverySchedule::new(k);
    for (g, group) in lattice_points(params.q, params.t).enumerate() {
        let members = params.group_members(&group);
        emit_group(params, &group, &members, demands.as_slice(), &mut schedule, |pass| {
            GroupLabel::Hypercube {
                group: g as u64,
                pass,
            }
        })?;
    }
    Ok(schedule)
}

/// Emits the `c·t` messages of one group. `members[j]` is the user playing
/// dimension `j` and `demand_of[members[j]]` its requested file.
pub(crate) fn emit_group(
    params: &HypercubeParams,
    group: &[u32],
    members: &[usize],
    demand_of: &[usize],
    schedule: &mut DeliverySchedule,
    label: impl Fn(u32) -> GroupLabel,
) -> Result<()> {
    let t = params.t as usize;
    for sender in 0..t {
        for pass in 0..params.c {
            let mut receivers = Vec::with_capacity(t - 1);
            let mut payload = Vec::with_capacity(t - 1);
            for receiver in (0..t).filter(|&s| s != sender) {
                let point = params.transmitted_point(group, sender, receiver, pass);
                receivers.push(members[receiver]);
                payload.push(PacketId::lattice(demand_of[members[receiver]], point));
            }
            schedule.push(members[sender], receivers, payload, label(pass))?;
        }
    }
    Ok(())
}

/// `t/(t-1) · q · (1 - 1/q)`, defined for rational `t > 1`.
pub fn generalized_rate(t: &Rational, q: &Rational) -> Rational {
    let one = Rational::one();
    t / (t - &one) * q * (&one - q.recip())
}

/// Closed-form rate `c·t`.
pub fn hc_rate(params: &HypercubeParams) -> Rational {
    let rate = int(params.c * params.t);
    debug_assert_eq!(rate, generalized_rate(&int(params.t), &int(params.q)));
    if params.c == 1 {
        debug_assert_eq!(rate, int(params.q));
    }
    rate
}

/// Packets per file `q^t`; for `c = 1` this is `√n^√n`.
pub fn hc_packetization(params: &HypercubeParams) -> BigUint {
    let k = params.packetization();
    if params.c == 1 {
        let root = (params.users() as u64).sqrt();
        debug_assert_eq!(root * root, params.users() as u64);
        debug_assert_eq!(k, BigUint::from(root).pow(root as u32));
    }
    k
}

/// Packetization and rate of the prior D2D scheme next to the hypercube's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    #[serde(serialize_with = "serialize_biguint")]
    pub k_prior: BigUint,
    #[serde(serialize_with = "serialize_rational")]
    pub r_prior: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub packetization_ratio: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub rate_ratio: Rational,
}

/// Exact `K' = t·C(n,t)`, `R' = q-1` and their ratios to the hypercube scheme.
pub fn compare_to_groupcast(params: &HypercubeParams) -> ComparisonReport {
    let n = params.users() as u64;
    let t = params.t as u64;
    let k_prior = BigUint::from(t) * binomial(n, t);
    let r_prior = int(params.q - 1);
    let k_hc = params.packetization();
    let packetization_ratio = Rational::new(k_prior.clone().into(), k_hc.into());
    let rate_ratio = &r_prior / hc_rate(params);
    debug_assert_eq!(rate_ratio, ratio(t as i64 - 1, t as i64));
    ComparisonReport {
        k_prior,
        r_prior,
        packetization_ratio,
        rate_ratio,
    }
}
