use d2d_caching::decentralized::{
    dec_cache_assignment, dec_delivery, dec_rounds, DecentralizedParams, PlacementCounts,
};
use d2d_caching::hypercube::{hc_delivery, hc_placement, hc_rate, HypercubeParams};
use d2d_caching::model::{format_rational, int, parse_rational, ratio, DemandVector};
use d2d_caching::rsgraph::{is_edge_partition, rs_decompose, verify_rs_property, Graph};
use d2d_caching::spatial::{link_set_feasible, reuse_factor, GridNetwork, ProtocolParams};
use d2d_caching::verify::verify_all;
use d2d_caching::{measured_rate, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (2usize..12).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..40).prop_map(move |pairs| {
            let mut g = Graph::empty(n);
            for (u, v) in pairs {
                if u != v && !g.has_edge(u, v) {
                    g.add_edge(u, v).unwrap();
                }
            }
            g
        })
    })
}

/// Small `(q, t, c)` with `c(t-1) = q-1`.
fn hypercube_strategy() -> impl Strategy<Value = HypercubeParams> {
    (2u32..=4, 1u32..=3).prop_filter_map("lattice too large", |(t, c)| {
        let q = c * (t - 1) + 1;
        (u64::from(q).pow(t) <= 1000).then(|| HypercubeParams::new(q, t, c).unwrap())
    })
}

/// Independent replay of the round rule on a count matrix.
fn rounds_oracle(counts: &[Vec<usize>], c: u32) -> Rational {
    let t = counts.len();
    let q = counts[0].len();
    let k = (q as i64).pow(t as u32);
    let mut left = counts.to_vec();
    let mut total = Rational::zero();
    while let Some(x) = left.iter().flatten().copied().filter(|&v| v > 0).min() {
        let skipped: i64 = left
            .iter()
            .map(|row| row.iter().filter(|&&v| v == 0).count() as i64)
            .product();
        total += int(x) * ratio(k - skipped, k) * int(c * t as u32);
        for v in left.iter_mut().flatten() {
            *v = v.saturating_sub(x);
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_is_valid_partition(g in graph_strategy(), gamma in 1usize..4) {
        let d = rs_decompose(&g, gamma);
        prop_assert!(verify_rs_property(&g, &d));
        prop_assert!(is_edge_partition(&g, &d));
        prop_assert!(d.matchings.iter().all(|m| m.len() == gamma));
    }

    #[test]
    fn hypercube_serves_each_need_once(p in hypercube_strategy(), extra in 0usize..5, seed in any::<u64>()) {
        let files = p.users() + extra;
        let lib = p.library(files).unwrap();
        let demands = d2d_caching::model::distinct_demands(p.users(), files, Some(seed)).unwrap();
        let cache = hc_placement(&p, &lib).unwrap();
        let schedule = hc_delivery(&p, &demands).unwrap();
        let (v, _) = verify_all(&cache, &schedule, &demands, &lib).unwrap();
        prop_assert!(v.passed() && v.exactly_once, "{:?}", v);
        prop_assert_eq!(measured_rate(&schedule), hc_rate(&p));
    }

    #[test]
    fn dropping_a_message_breaks_recovery(p in hypercube_strategy(), pick in any::<prop::sample::Index>()) {
        let lib = p.library(p.users()).unwrap();
        let demands = DemandVector::identity(p.users());
        let cache = hc_placement(&p, &lib).unwrap();
        let full = hc_delivery(&p, &demands).unwrap();
        let drop = pick.index(full.len());
        let mut cut = d2d_caching::DeliverySchedule::new(full.packets_per_file());
        for (i, m) in full.messages().iter().enumerate() {
            if i != drop {
                cut.push_message(m.clone()).unwrap();
            }
        }
        let (v, _) = verify_all(&cache, &cut, &demands, &lib).unwrap();
        prop_assert!(!v.full_recovery);
    }

    #[test]
    fn decentralized_rounds_match_oracle(
        q in 2u32..5,
        counts in proptest::collection::vec(0usize..4, 4..=8),
    ) {
        let t = 2u32;
        let q_us = q as usize;
        prop_assume!(counts.len() >= 2 * q_us);
        let matrix: Vec<Vec<usize>> = counts[..2 * q_us].chunks(q_us).map(|r| r.to_vec()).collect();
        let users: usize = matrix.iter().flatten().sum();
        prop_assume!(users >= 2);
        let p = DecentralizedParams::new(users, q, t).unwrap();
        let Ok(placement) = PlacementCounts::from_counts(&p, &matrix) else {
            return Ok(());
        };
        match dec_rounds(&p, &placement) {
            Ok(log) => {
                prop_assert!(matrix.iter().flatten().all(|&v| v > 0));
                prop_assert_eq!(&log.total_rate, &rounds_oracle(&matrix, p.c()));
                let served: usize = log.rounds.iter().map(|r| r.satisfied_users.len()).sum();
                prop_assert_eq!(served, users);
                let files = users.max(q_us);
                if let Ok(lib) = p.library(files) {
                    let demands = DemandVector::identity(users);
                    let (dlog, schedule) = dec_delivery(&p, &placement, &demands).unwrap();
                    prop_assert_eq!(&dlog, &log);
                    prop_assert_eq!(measured_rate(&schedule), log.total_rate.clone());
                    let cache = dec_cache_assignment(&p, &placement, &lib).unwrap();
                    let (v, _) = verify_all(&cache, &schedule, &demands, &lib).unwrap();
                    prop_assert!(v.passed(), "{:?}", v);
                }
            }
            Err(_) => prop_assert!(matrix.iter().flatten().any(|&v| v == 0)),
        }
    }

    #[test]
    fn feasible_link_sets_stay_feasible_when_thinned(
        side in 3usize..8,
        links in proptest::collection::vec((0usize..64, 0usize..64), 1..6),
        delta_num in 1i64..8,
        range_num in 1i64..6,
    ) {
        let grid = GridNetwork::new(side).unwrap();
        let n = grid.users();
        let links: Vec<(usize, usize)> = links
            .into_iter()
            .map(|(a, b)| (a % n, b % n))
            .filter(|(a, b)| a != b)
            .collect();
        let protocol = ProtocolParams::new(ratio(range_num, n as i64), ratio(delta_num, 4), int(1)).unwrap();
        if link_set_feasible(&grid, &protocol, &links) {
            for skip in 0..links.len() {
                let subset: Vec<_> = links.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, l)| *l).collect();
                prop_assert!(link_set_feasible(&grid, &protocol, &subset));
            }
        }
    }

    #[test]
    fn reuse_factor_is_monotone(a in 0i64..400, b in 0i64..400) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let k_lo = reuse_factor(&ratio(lo, 100));
        let k_hi = reuse_factor(&ratio(hi, 100));
        prop_assert!(k_lo <= k_hi);
        let root = (k_lo as f64).sqrt() as u64;
        prop_assert_eq!(root * root, k_lo);
    }

    #[test]
    fn rationals_round_trip(num in -10_000i64..10_000, den in 1i64..10_000) {
        let r = ratio(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
