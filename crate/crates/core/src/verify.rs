//! Correctness oracle for any placement + schedule pair.
//!
//! Every packet gets a synthetic byte payload, every message is XOR-encoded
//! from those payloads, and every intended receiver tries to cancel the
//! constituents it already knows. A reception decodes iff exactly one
//! constituent is unknown; the recovered bytes are compared with the ground
//! truth.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{
    CacheAssignment, DeliverySchedule, DemandVector, Locator, NetworkParams, PacketId, Rational,
};

pub const DEFAULT_PAYLOAD_LEN: usize = 32;
pub const DEFAULT_PAYLOAD_SEED: u64 = 0x5eed_d2d0;

/// Deterministic synthetic packet contents.
///
/// The payload of a packet is the concatenation of
/// `SHA-256(seed_le ‖ block_le ‖ file_le ‖ locator)` blocks, truncated to the
/// configured length. Lattice locators are encoded as tag `0`, the dimension
/// count and each coordinate; vertex slots as tag `1`, vertex and slot; all
/// integers little-endian `u32` except the `u64` seed.
#[derive(Debug, Clone)]
pub struct PayloadTable {
    seed: u64,
    len: usize,
    memo: HashMap<PacketId, Vec<u8>>,
}

impl PayloadTable {
    pub fn new(seed: u64, len: usize) -> Result<Self> {
        if len < 16 {
            return Err(Error::InvalidParams(format!(
                "payload length {len} below the 16-byte minimum"
            )));
        }
        Ok(Self {
            seed,
            len,
            memo: HashMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn derive(seed: u64, len: usize, packet: &PacketId) -> Vec<u8> {
        let mut out = Vec::with_capacity(len + 32);
        let mut block = 0u32;
        while out.len() < len {
            let mut h = Sha256::new();
            h.update(seed.to_le_bytes());
            h.update(block.to_le_bytes());
            h.update(packet.file.to_le_bytes());
            match &packet.locator {
                Locator::Lattice(coords) => {
                    h.update([0u8]);
                    h.update((coords.len() as u32).to_le_bytes());
                    for c in coords {
                        h.update(c.to_le_bytes());
                    }
                }
                Locator::VertexSlot { vertex, slot } => {
                    h.update([1u8]);
                    h.update(vertex.to_le_bytes());
                    h.update(slot.to_le_bytes());
                }
            }
            out.extend_from_slice(&h.finalize());
            block += 1;
        }
        out.truncate(len);
        out
    }

    pub fn payload(&mut self, packet: &PacketId) -> &[u8] {
        let (seed, len) = (self.seed, self.len);
        self.memo
            .entry(packet.clone())
            .or_insert_with(|| Self::derive(seed, len, packet))
    }
}

fn xor_into(acc: &mut [u8], other: &[u8]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a ^= b;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeMode {
    /// Receivers cancel only packets in their cache.
    #[default]
    CacheOnly,
    /// Receivers may also cancel packets decoded from earlier messages.
    Progressive,
}

#[derive(Clone, Debug)]
pub struct DecodeOptions {
    pub mode: DecodeMode,
    pub payload_seed: u64,
    pub payload_len: usize,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        Self {
            mode: DecodeMode::CacheOnly,
            payload_seed: DEFAULT_PAYLOAD_SEED,
            payload_len: DEFAULT_PAYLOAD_LEN,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodeStep {
    pub message: usize,
    pub packet: PacketId,
}

#[derive(Clone, Debug, Serialize)]
pub struct UserRecovery {
    pub user: usize,
    pub demanded_file: usize,
    pub decoded: BTreeSet<PacketId>,
    pub missing: BTreeSet<PacketId>,
    pub steps: Vec<DecodeStep>,
}

impl UserRecovery {
    pub fn recovered(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Outcome of running every reception of a schedule.
#[derive(Clone, Debug)]
pub struct RecoveryReport {
    pub users: Vec<UserRecovery>,
    /// Delivery count per `(user, needed packet)`, zeros included.
    pub multiplicity: BTreeMap<(usize, PacketId), usize>,
    /// Receptions with no unknown constituent, or repeating a decoded packet.
    pub redundant: usize,
    /// Receptions with two or more unknown constituents.
    pub undecodable: usize,
    /// Decoded packets that do not belong to the receiver's demanded file.
    pub unneeded: usize,
    pub byte_mismatches: usize,
}

impl RecoveryReport {
    pub fn full_recovery(&self) -> bool {
        self.users.iter().all(UserRecovery::recovered)
    }

    pub fn byte_exact(&self) -> bool {
        self.byte_mismatches == 0
    }

    pub fn summary(&self) -> RecoverySummary {
        RecoverySummary {
            full_recovery: self.full_recovery(),
            users: self
                .users
                .iter()
                .map(|u| UserSummary {
                    user: u.user,
                    recovered: u.recovered(),
                    decoded: u.decoded.len(),
                    missing: u.missing.len(),
                })
                .collect(),
            redundant: self.redundant,
            undecodable: self.undecodable,
            unneeded: self.unneeded,
            byte_mismatches: self.byte_mismatches,
            max_multiplicity: self.multiplicity.values().copied().max().unwrap_or(0),
            undelivered: self.multiplicity.values().filter(|&&c| c == 0).count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UserSummary {
    pub user: usize,
    pub recovered: bool,
    pub decoded: usize,
    pub missing: usize,
}

/// JSON form of a [`RecoveryReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoverySummary {
    pub full_recovery: bool,
    pub users: Vec<UserSummary>,
    pub redundant: usize,
    pub undecodable: usize,
    pub unneeded: usize,
    pub byte_mismatches: usize,
    pub max_multiplicity: usize,
    pub undelivered: usize,
}

pub fn simulate_and_decode(
    placement: &CacheAssignment,
    schedule: &DeliverySchedule,
    demands: &DemandVector,
    mode: DecodeMode,
) -> Result<RecoveryReport> {
    simulate_and_decode_with(
        placement,
        schedule,
        demands,
        &DecodeOptions {
            mode,
            ..DecodeOptions::default()
        },
    )
}

pub fn simulate_and_decode_with(
    placement: &CacheAssignment,
    schedule: &DeliverySchedule,
    demands: &DemandVector,
    options: &DecodeOptions,
) -> Result<RecoveryReport> {
    if placement.packets_per_file() != schedule.packets_per_file() {
        return Err(Error::PacketizationMismatch {
            placement: placement.packets_per_file(),
            schedule: schedule.packets_per_file(),
        });
    }
    if demands.len() != placement.users() {
        return Err(Error::DemandLength {
            expected: placement.users(),
            got: demands.len(),
        });
    }
    let mut table = PayloadTable::new(options.payload_seed, options.payload_len)?;
    let progressive = options.mode == DecodeMode::Progressive;

    let mut multiplicity = BTreeMap::new();
    let mut users: Vec<UserRecovery> = (0..placement.users())
        .map(|u| {
            let file = demands.file(u);
            let missing: BTreeSet<PacketId> = placement
                .file_packets(file)
                .filter(|p| !placement.contains(u, p))
                .collect();
            for p in &missing {
                multiplicity.insert((u, p.clone()), 0usize);
            }
            UserRecovery {
                user: u,
                demanded_file: file,
                decoded: BTreeSet::new(),
                missing,
                steps: Vec::new(),
            }
        })
        .collect();

    let mut redundant = 0;
    let mut undecodable = 0;
    let mut unneeded = 0;
    let mut byte_mismatches = 0;
    let mut coded = vec![0u8; table.len()];
    let mut recovered = vec![0u8; table.len()];

    for (idx, msg) in schedule.messages().iter().enumerate() {
        coded.iter_mut().for_each(|b| *b = 0);
        for p in &msg.payload {
            xor_into(&mut coded, table.payload(p));
        }
        for &r in &msg.receivers {
            let knows = |p: &PacketId, rec: &UserRecovery| {
                placement.contains(r, p) || (progressive && rec.decoded.contains(p))
            };
            let mut unknown = msg.payload.iter().filter(|p| !knows(p, &users[r]));
            let (Some(target), None) = (unknown.next(), unknown.next()) else {
                if msg.payload.iter().all(|p| knows(p, &users[r])) {
                    redundant += 1;
                } else {
                    undecodable += 1;
                }
                continue;
            };
            recovered.copy_from_slice(&coded);
            for p in msg.payload.iter().filter(|p| *p != target) {
                xor_into(&mut recovered, table.payload(p));
            }
            if recovered.as_slice() != table.payload(target) {
                byte_mismatches += 1;
            }
            let rec = &mut users[r];
            if target.file as usize != rec.demanded_file {
                unneeded += 1;
            }
            if let Some(count) = multiplicity.get_mut(&(r, target.clone())) {
                *count += 1;
            }
            if !rec.decoded.insert(target.clone()) {
                redundant += 1;
            }
            rec.missing.remove(target);
            rec.steps.push(DecodeStep {
                message: idx,
                packet: target.clone(),
            });
        }
    }

    Ok(RecoveryReport {
        users,
        multiplicity,
        redundant,
        undecodable,
        unneeded,
        byte_mismatches,
    })
}

/// Cached amount of every user is at most `M` (exactly `M` when the placement
/// declares exact memory use).
pub fn check_memory(placement: &CacheAssignment, params: &NetworkParams) -> bool {
    (0..placement.users()).all(|u| {
        let amount = placement.cached_amount(u);
        if placement.exact_memory() {
            &amount == params.cache()
        } else {
            &amount <= params.cache()
        }
    })
}

/// Every payload packet is in its sender's cache.
pub fn check_sender_caches(placement: &CacheAssignment, schedule: &DeliverySchedule) -> bool {
    schedule
        .messages()
        .iter()
        .all(|m| m.payload.iter().all(|p| placement.contains(m.sender, p)))
}

/// Every intended receiver lacks exactly one payload packet in its cache.
pub fn check_one_unknown(placement: &CacheAssignment, schedule: &DeliverySchedule) -> bool {
    schedule.messages().iter().all(|m| {
        m.receivers
            .iter()
            .all(|&r| m.payload.iter().filter(|p| !placement.contains(r, p)).count() == 1)
    })
}

pub fn delivery_multiplicity(report: &RecoveryReport) -> &BTreeMap<(usize, PacketId), usize> {
    &report.multiplicity
}

pub fn exactly_once(report: &RecoveryReport) -> bool {
    report.multiplicity.values().all(|&c| c == 1)
}

/// The four placement/delivery checks plus the multiplicity and byte-level
/// verdicts, as reported by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub memory: bool,
    pub sender_caches: bool,
    pub one_unknown: bool,
    pub full_recovery: bool,
    pub exactly_once: bool,
    pub byte_exact: bool,
    pub redundant_deliveries: usize,
}

impl Verdicts {
    /// Redundant deliveries are warnings, so `exactly_once` is not required.
    pub fn passed(&self) -> bool {
        self.memory && self.sender_caches && self.one_unknown && self.full_recovery && self.byte_exact
    }
}

pub fn verify_all(
    placement: &CacheAssignment,
    schedule: &DeliverySchedule,
    demands: &DemandVector,
    params: &NetworkParams,
) -> Result<(Verdicts, RecoveryReport)> {
    let report = simulate_and_decode(placement, schedule, demands, DecodeMode::CacheOnly)?;
    let verdicts = Verdicts {
        memory: check_memory(placement, params),
        sender_caches: check_sender_caches(placement, schedule),
        one_unknown: check_one_unknown(placement, schedule),
        full_recovery: report.full_recovery(),
        exactly_once: exactly_once(&report),
        byte_exact: report.byte_exact(),
        redundant_deliveries: report.redundant,
    };
    Ok((verdicts, report))
}

/// Total cached amount across users; zero for an empty network.
pub fn total_cached(placement: &CacheAssignment) -> Rational {
    (0..placement.users()).fold(Rational::zero(), |acc, u| acc + placement.cached_amount(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::{hc_delivery, hc_placement, HypercubeParams};
    use crate::model::{int, GroupLabel, MulticastMessage};

    fn hc(q: u32) -> (HypercubeParams, NetworkParams, CacheAssignment, DeliverySchedule, DemandVector) {
        let p = HypercubeParams::symmetric(q).unwrap();
        let lib = p.library(p.users()).unwrap();
        let cache = hc_placement(&p, &lib).unwrap();
        let d = DemandVector::identity(p.users());
        let s = hc_delivery(&p, &d).unwrap();
        (p, lib, cache, s, d)
    }

    #[test]
    fn hypercube_nine_users_recover_everything() {
        let (_, lib, cache, s, d) = hc(3);
        let (v, report) = verify_all(&cache, &s, &d, &lib).unwrap();
        assert!(v.passed());
        assert!(v.exactly_once);
        assert_eq!(report.multiplicity.len(), 9 * 18);
        assert_eq!(report.redundant, 0);
    }

    #[test]
    fn empty_schedule_with_full_caching() {
        let lib = NetworkParams::new(2, 2, int(2)).unwrap();
        let locs = vec![Locator::Lattice(vec![0]), Locator::Lattice(vec![1])];
        let cache = CacheAssignment::uniform(&lib, locs.clone(), vec![locs.clone(), locs], true);
        let s = DeliverySchedule::new(2);
        let r = simulate_and_decode(&cache, &s, &DemandVector::identity(2), DecodeMode::CacheOnly).unwrap();
        assert!(r.full_recovery());
        assert!(check_memory(&cache, &lib));
    }

    #[test]
    fn injected_packet_breaks_memory() {
        let (_, lib, mut cache, _, _) = hc(3);
        assert!(check_memory(&cache, &lib));
        cache.insert(0, PacketId::lattice(0, vec![1, 1, 1]));
        assert!(!check_memory(&cache, &lib));
    }

    #[test]
    fn forged_packet_breaks_sender_check() {
        let (_, _, cache, mut s, _) = hc(3);
        assert!(check_sender_caches(&cache, &s));
        // user 0 caches ℓ_0 = 0 only
        let forged = MulticastMessage::new(
            0,
            vec![4],
            vec![PacketId::lattice(4, vec![1, 2, 2])],
            s.packet_size(),
            GroupLabel::Unlabeled,
        )
        .unwrap();
        s.push_message(forged).unwrap();
        assert!(!check_sender_caches(&cache, &s));
    }

    #[test]
    fn duplicated_message_is_flagged() {
        let (_, _, cache, mut s, d) = hc(3);
        let dup = s.messages()[0].clone();
        s.push_message(dup).unwrap();
        let r = simulate_and_decode(&cache, &s, &d, DecodeMode::CacheOnly).unwrap();
        assert!(r.full_recovery());
        assert!(!exactly_once(&r));
        assert_eq!(delivery_multiplicity(&r).values().max(), Some(&2));
        assert_eq!(r.redundant, 2);
    }

    #[test]
    fn two_unknowns_do_not_decode() {
        let (_, _, cache, _, d) = hc(3);
        let mut s = DeliverySchedule::new(27);
        s.push(
            2,
            vec![4],
            vec![PacketId::lattice(4, vec![2, 2, 2]), PacketId::lattice(4, vec![2, 0, 2])],
            GroupLabel::Unlabeled,
        )
        .unwrap();
        let r = simulate_and_decode(&cache, &s, &d, DecodeMode::CacheOnly).unwrap();
        assert_eq!(r.undecodable, 1);
        assert!(!check_one_unknown(&cache, &s));
    }

    #[test]
    fn packetization_mismatch_is_an_error() {
        let (_, _, cache, _, d) = hc(3);
        let s = DeliverySchedule::new(9);
        assert!(matches!(
            simulate_and_decode(&cache, &s, &d, DecodeMode::CacheOnly),
            Err(Error::PacketizationMismatch { .. })
        ));
    }

    #[test]
    fn payloads_are_deterministic_and_distinct() {
        let a = PayloadTable::derive(1, 40, &PacketId::lattice(0, vec![0, 1]));
        let b = PayloadTable::derive(1, 40, &PacketId::lattice(0, vec![0, 1]));
        let c = PayloadTable::derive(1, 40, &PacketId::lattice(0, vec![1, 0]));
        let d = PayloadTable::derive(2, 40, &PacketId::lattice(0, vec![0, 1]));
        assert_eq!(a.len(), 40);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        assert!(PayloadTable::new(0, 8).is_err());
    }

    #[test]
    fn progressive_mode_agrees_on_hypercube() {
        let (_, _, cache, s, d) = hc(3);
        let a = simulate_and_decode(&cache, &s, &d, DecodeMode::CacheOnly).unwrap();
        let b = simulate_and_decode(&cache, &s, &d, DecodeMode::Progressive).unwrap();
        assert_eq!(a.full_recovery(), b.full_recovery());
        assert_eq!(a.multiplicity, b.multiplicity);
    }
}
