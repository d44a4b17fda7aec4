//! Shared domain types: network parameters, demands, packet identities, cache
//! assignments and delivery schedules, plus rate accounting and the uncoded
//! baseline.
//!
//! Users and files are 0-indexed. The file size is normalized to 1, so a
//! packet of a file split into `K` pieces has size `1/K`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational used for every rate, size and memory quantity.
pub type Rational = BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}

/// Lossless `"p/q"` rendering; integers keep their `/1` denominator.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Accepts `"p/q"`, a plain integer `"p"` or a terminating decimal `"0.05"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let parse_int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational: {text:?}")))
    };
    match text.split_once('/') {
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(parse_int(p)?, denom))
        }
        None => match text.split_once('.') {
            Some((whole, frac)) if !frac.is_empty() && frac.bytes().all(|b| b.is_ascii_digit()) => {
                let scale = BigInt::from(10u32).pow(frac.len() as u32);
                let digits = parse_int(&format!("{whole}{frac}"))?;
                Ok(Rational::new(digits, scale))
            }
            _ => Ok(Rational::from_integer(parse_int(text)?)),
        },
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros trimmed.
pub fn format_float(value: f64) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    if value == 0.0 {
        return "0".into();
    }
    let exp = value.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        let s = format!("{value:.11e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{mantissa}e{e}");
    }
    let s = format!("{:.*}", (11 - exp).max(0) as usize, value);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Returns the integer value when the rational has denominator one.
pub fn as_integer(value: &Rational) -> Option<BigInt> {
    value.is_integer().then(|| value.to_integer())
}

pub(crate) fn serialize_rational<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(value))
}

pub(crate) fn serialize_biguint<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Global instance: `n` users, a library of `m` files and a per-user cache of
/// `M` files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkParams {
    users: usize,
    files: usize,
    cache: Rational,
}

impl NetworkParams {
    pub fn new(users: usize, files: usize, cache: Rational) -> Result<Self> {
        if users == 0 || files == 0 {
            return Err(Error::InvalidParams("n and m must be positive".into()));
        }
        if files < users {
            return Err(Error::LibraryTooSmall { users, files });
        }
        if !cache.is_positive() || cache > int(files) {
            return Err(Error::InvalidParams(format!(
                "cache size M={} must lie in (0, m={files}]",
                format_rational(&cache)
            )));
        }
        let params = Self { users, files, cache };
        if params.replication() < Rational::one() {
            return Err(Error::InvalidParams(format!(
                "t = nM/m = {} < 1: the users cannot jointly cache the library",
                format_rational(&params.replication())
            )));
        }
        Ok(params)
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn files(&self) -> usize {
        self.files
    }

    /// Per-user cache size `M` in file units.
    pub fn cache(&self) -> &Rational {
        &self.cache
    }

    /// `t = nM/m`, the number of times the library is cached collectively.
    pub fn replication(&self) -> Rational {
        int(self.users) * &self.cache / int(self.files)
    }

    /// `m/M`.
    pub fn memory_ratio(&self) -> Rational {
        int(self.files) / &self.cache
    }

    /// `M = m` caches the whole library; legal but degenerate.
    pub fn is_full_caching(&self) -> bool {
        self.cache == int(self.files)
    }
}

/// Per-user requested file indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DemandVector(Vec<usize>);

impl DemandVector {
    pub fn new(files: Vec<usize>, library: usize, distinct: bool) -> Result<Self> {
        let mut seen = HashSet::with_capacity(files.len());
        for &f in &files {
            if f >= library {
                return Err(Error::DemandOutOfRange { file: f, files: library });
            }
            if distinct && !seen.insert(f) {
                return Err(Error::DuplicateDemand(f));
            }
        }
        Ok(Self(files))
    }

    pub fn identity(users: usize) -> Self {
        Self((0..users).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn file(&self, user: usize) -> usize {
        self.0[user]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_distinct(&self) -> bool {
        let set: HashSet<_> = self.0.iter().collect();
        set.len() == self.0.len()
    }

    /// Demands of a subset of users, in the given order.
    pub fn restrict(&self, users: &[usize]) -> Self {
        Self(users.iter().map(|&u| self.0[u]).collect())
    }
}

/// `users` distinct files out of `files`: the identity assignment without a
/// seed, otherwise a uniform injective draw from a ChaCha8 stream.
pub fn distinct_demands(users: usize, files: usize, seed: Option<u64>) -> Result<DemandVector> {
    if files < users {
        return Err(Error::LibraryTooSmall { users, files });
    }
    match seed {
        None => Ok(DemandVector::identity(users)),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picked = rand::seq::index::sample(&mut rng, files, users).into_vec();
            Ok(DemandVector(picked))
        }
    }
}

/// Worst-case demand vector: every user requests a different file.
pub fn worst_case_demands(params: &NetworkParams, seed: Option<u64>) -> Result<DemandVector> {
    distinct_demands(params.users(), params.files(), seed)
}

/// Scheme-specific position of a packet inside its file.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Locator {
    /// Hypercube lattice point, one coordinate per dimension.
    Lattice(Vec<u32>),
    /// Graph vertex and sub-index in `[0, 2γ-1)`.
    VertexSlot { vertex: u32, slot: u32 },
}

impl fmt::Display for Locator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locator::Lattice(coords) => {
                write!(f, "(")?;
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Locator::VertexSlot { vertex, slot } => write!(f, "v{vertex}.{slot}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PacketId {
    pub file: u32,
    pub locator: Locator,
}

impl PacketId {
    pub fn lattice(file: usize, coords: Vec<u32>) -> Self {
        Self {
            file: file as u32,
            locator: Locator::Lattice(coords),
        }
    }

    pub fn vertex_slot(file: usize, vertex: usize, slot: usize) -> Self {
        Self {
            file: file as u32,
            locator: Locator::VertexSlot {
                vertex: vertex as u32,
                slot: slot as u32,
            },
        }
    }
}

impl fmt::Display for PacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{{{},{}}}", self.file, self.locator)
    }
}

/// Which user caches which packets.
///
/// Every scheme here splits all files the same way, so the packet universe of
/// one file is stored once as a list of locators.
#[derive(Clone, Debug)]
pub struct CacheAssignment {
    packets_per_file: u64,
    cache_size: Rational,
    files: usize,
    locators: Vec<Locator>,
    caches: Vec<HashSet<PacketId>>,
    exact_memory: bool,
}

impl CacheAssignment {
    /// Builds caches where user `u` stores the locators `per_user[u]` of every
    /// file in the library.
    ///
    /// `exact_memory` selects whether the memory check demands equality with
    /// `M` or only `≤ M`.
    pub fn uniform(
        params: &NetworkParams,
        locators: Vec<Locator>,
        per_user: Vec<Vec<Locator>>,
        exact_memory: bool,
    ) -> Self {
        let files = params.files();
        let caches = per_user
            .into_iter()
            .map(|locs| {
                let mut set = HashSet::with_capacity(locs.len() * files);
                for file in 0..files {
                    for loc in &locs {
                        set.insert(PacketId {
                            file: file as u32,
                            locator: loc.clone(),
                        });
                    }
                }
                set
            })
            .collect();
        Self {
            packets_per_file: locators.len() as u64,
            cache_size: params.cache().clone(),
            files,
            locators,
            caches,
            exact_memory,
        }
    }

    pub fn packets_per_file(&self) -> u64 {
        self.packets_per_file
    }

    pub fn cache_size(&self) -> &Rational {
        &self.cache_size
    }

    pub fn files(&self) -> usize {
        self.files
    }

    pub fn users(&self) -> usize {
        self.caches.len()
    }

    pub fn exact_memory(&self) -> bool {
        self.exact_memory
    }

    /// All packet locators of one file.
    pub fn locators(&self) -> &[Locator] {
        &self.locators
    }

    pub fn cache(&self, user: usize) -> &HashSet<PacketId> {
        &self.caches[user]
    }

    pub fn contains(&self, user: usize, packet: &PacketId) -> bool {
        self.caches[user].contains(packet)
    }

    pub fn cached_count(&self, user: usize) -> usize {
        self.caches[user].len()
    }

    /// Cached amount of user `u` in file units.
    pub fn cached_amount(&self, user: usize) -> Rational {
        ratio(self.cached_count(user) as i64, self.packets_per_file as i64)
    }

    /// Every packet of `file`, in locator order.
    pub fn file_packets(&self, file: usize) -> impl Iterator<Item = PacketId> + '_ {
        self.locators.iter().map(move |loc| PacketId {
            file: file as u32,
            locator: loc.clone(),
        })
    }

    /// Adds a packet to a user's cache. Meant for fault injection in tests.
    pub fn insert(&mut self, user: usize, packet: PacketId) -> bool {
        self.caches[user].insert(packet)
    }
}

/// Which multicast group, matching or round produced a message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupLabel {
    Hypercube {
        group: u64,
        pass: u32,
    },
    Decentralized {
        round: usize,
        instance: usize,
        group: u64,
        pass: u32,
    },
    Matching {
        matching: usize,
    },
    Residual {
        edge: (usize, usize),
    },
    Unlabeled,
}

/// One XOR-coded transmission.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MulticastMessage {
    pub sender: usize,
    pub receivers: Vec<usize>,
    pub payload: Vec<PacketId>,
    #[serde(serialize_with = "serialize_rational")]
    pub size: Rational,
    pub label: GroupLabel,
}

impl MulticastMessage {
    pub fn new(
        sender: usize,
        receivers: Vec<usize>,
        payload: Vec<PacketId>,
        size: Rational,
        label: GroupLabel,
    ) -> Result<Self> {
        if receivers.is_empty() {
            return Err(Error::MalformedMessage("no receivers".into()));
        }
        if receivers.contains(&sender) {
            return Err(Error::MalformedMessage(format!(
                "sender {sender} listed among its own receivers"
            )));
        }
        if payload.is_empty() {
            return Err(Error::MalformedMessage("empty payload".into()));
        }
        if !size.is_positive() {
            return Err(Error::MalformedMessage("non-positive size".into()));
        }
        Ok(Self {
            sender,
            receivers,
            payload,
            size,
            label,
        })
    }
}

/// Ordered transmissions of one delivery phase.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeliverySchedule {
    packets_per_file: u64,
    messages: Vec<MulticastMessage>,
}

impl DeliverySchedule {
    pub fn new(packets_per_file: u64) -> Self {
        Self {
            packets_per_file,
            messages: Vec::new(),
        }
    }

    pub fn packets_per_file(&self) -> u64 {
        self.packets_per_file
    }

    pub fn packet_size(&self) -> Rational {
        ratio(1, self.packets_per_file as i64)
    }

    pub fn messages(&self) -> &[MulticastMessage] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Appends a message of one packet size (`1/K`).
    pub fn push(
        &mut self,
        sender: usize,
        receivers: Vec<usize>,
        payload: Vec<PacketId>,
        label: GroupLabel,
    ) -> Result<()> {
        let size = self.packet_size();
        self.messages
            .push(MulticastMessage::new(sender, receivers, payload, size, label)?);
        Ok(())
    }

    /// Appends a prebuilt message; its size must be `1/K`.
    pub fn push_message(&mut self, message: MulticastMessage) -> Result<()> {
        if message.size != self.packet_size() {
            return Err(Error::MalformedMessage(format!(
                "size {} differs from the packet size 1/{}",
                format_rational(&message.size),
                self.packets_per_file
            )));
        }
        self.messages.push(message);
        Ok(())
    }

    pub fn extend(&mut self, other: DeliverySchedule) -> Result<()> {
        if other.packets_per_file != self.packets_per_file {
            return Err(Error::PacketizationMismatch {
                placement: self.packets_per_file,
                schedule: other.packets_per_file,
            });
        }
        self.messages.extend(other.messages);
        Ok(())
    }
}

/// Sum of message sizes, i.e. total traffic normalized by the file size.
pub fn measured_rate(schedule: &DeliverySchedule) -> Rational {
    let mut total = Rational::zero();
    for msg in schedule.messages() {
        total += &msg.size;
    }
    total
}

/// Conventional uncoded unicast rate `n(1 - M/m)`.
pub fn uncoded_rate(params: &NetworkParams) -> Rational {
    int(params.users()) * (Rational::one() - params.cache() / int(params.files()))
}

/// Rate and packetization `(m/M - 1, t·C(n,t))` of the state-of-the-art
/// D2D scheme that every combinatorial design here is compared against.
pub fn groupcast_baseline(params: &NetworkParams) -> Result<(BigUint, Rational)> {
    let t = as_integer(&params.replication()).ok_or_else(|| {
        Error::InvalidParams(format!(
            "t = nM/m = {} is not an integer",
            format_rational(&params.replication())
        ))
    })?;
    let t = t
        .to_u64()
        .ok_or_else(|| Error::InvalidParams("t out of range".into()))?;
    let k = BigUint::from(t) * binomial(params.users() as u64, t);
    let r = params.memory_ratio() - Rational::one();
    Ok((k, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uncoded_rate_examples() {
        let p = NetworkParams::new(32, 96, int(32)).unwrap();
        assert_eq!(uncoded_rate(&p), ratio(64, 3));
        let full = NetworkParams::new(4, 4, int(4)).unwrap();
        assert!(full.is_full_caching());
        assert_eq!(uncoded_rate(&full), int(0));
        let p = NetworkParams::new(6, 6, int(4)).unwrap();
        assert_eq!(uncoded_rate(&p), int(2));
    }

    #[test]
    fn empty_schedule_has_zero_rate() {
        assert_eq!(measured_rate(&DeliverySchedule::new(27)), int(0));
    }

    #[test]
    fn identity_demands_without_seed() {
        let p = NetworkParams::new(6, 6, int(4)).unwrap();
        assert_eq!(worst_case_demands(&p, None).unwrap().as_slice(), &[0, 1, 2, 3, 4, 5]);
        let p = NetworkParams::new(4, 4, int(2)).unwrap();
        assert_eq!(worst_case_demands(&p, None).unwrap().as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn seeded_demands_are_distinct_and_reproducible() {
        let p = NetworkParams::new(3, 5, int(5)).unwrap();
        let a = worst_case_demands(&p, Some(11)).unwrap();
        let b = worst_case_demands(&p, Some(11)).unwrap();
        assert_eq!(a, b);
        assert!(a.is_distinct());
        assert!(a.as_slice().iter().all(|&f| f < 5));
    }

    #[test]
    fn too_small_library_is_rejected() {
        assert!(matches!(
            distinct_demands(5, 3, None),
            Err(Error::LibraryTooSmall { users: 5, files: 3 })
        ));
        assert!(NetworkParams::new(5, 3, int(1)).is_err());
    }

    #[test]
    fn demand_vector_validation() {
        assert!(matches!(
            DemandVector::new(vec![0, 0], 3, true),
            Err(Error::DuplicateDemand(0))
        ));
        assert!(DemandVector::new(vec![0, 0], 3, false).is_ok());
        assert!(DemandVector::new(vec![3], 3, false).is_err());
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(parse_rational("220/9").unwrap(), ratio(220, 9));
        assert_eq!(parse_rational(" 4 ").unwrap(), int(4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational("0.05").unwrap(), ratio(1, 20));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn float_rendering() {
        assert_eq!(format_float(24.444444444444443), "24.4444444444");
        assert_eq!(format_float(3.0), "3");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1234567.5), "1234567.5");
        assert_eq!(format_float(1.5e-7), "1.5e-7");
        assert_eq!(format_float(-2.25), "-2.25");
    }

    #[test]
    fn message_invariants() {
        let pid = PacketId::lattice(0, vec![0, 1]);
        assert!(MulticastMessage::new(1, vec![1], vec![pid.clone()], ratio(1, 4), GroupLabel::Unlabeled).is_err());
        assert!(MulticastMessage::new(1, vec![2], vec![], ratio(1, 4), GroupLabel::Unlabeled).is_err());
        let mut s = DeliverySchedule::new(4);
        let foreign = MulticastMessage::new(0, vec![1], vec![pid], ratio(1, 3), GroupLabel::Unlabeled).unwrap();
        assert!(s.push_message(foreign).is_err());
    }

    #[test]
    fn groupcast_baseline_small_cases() {
        let p = NetworkParams::new(6, 6, int(4)).unwrap();
        let (k, r) = groupcast_baseline(&p).unwrap();
        assert_eq!(k, BigUint::from(60u32));
        assert_eq!(r, ratio(1, 2));
        assert_eq!(binomial(9, 3), BigUint::from(84u32));
    }

    #[test]
    fn packet_display() {
        assert_eq!(PacketId::lattice(4, vec![2, 2, 2]).to_string(), "W_{4,(2,2,2)}");
    }
}
