use crate::error::{Error, Result};
use crate::model::{
    format_rational, int, ratio, CacheAssignment, DeliverySchedule, DemandVector, GroupLabel,
    Locator, NetworkParams, PacketId, Rational,
};

use super::decompose::{Matching, RsDecomposition};
use super::graph::Graph;

/// `K = n(2γ-1)`: every vertex owns `2γ-1` slots of each file.
pub fn rs_packetization(vertices: usize, gamma: usize) -> u64 {
    (vertices * (2 * gamma - 1)) as u64
}

/// 1-based packet number `j = vertex·(2γ-1) + slot + 1`.
pub fn packet_number(vertex: usize, slot: usize, gamma: usize) -> usize {
    vertex * (2 * gamma - 1) + slot + 1
}

/// Inverse of [`packet_number`].
pub fn vertex_slot(packet: usize, gamma: usize) -> (usize, usize) {
    let width = 2 * gamma - 1;
    ((packet - 1) / width, (packet - 1) % width)
}

/// Cache size `m(n - d_min)/n` needed by the least-connected user.
pub fn graph_memory(graph: &Graph, files: usize) -> Rational {
    let n = graph.vertices();
    ratio((files * (n - graph.min_degree())) as i64, n as i64)
}

/// User `u` caches every slot of its own vertex and of every vertex it is not
/// adjacent to, for every file. The declared `M` must equal
/// [`graph_memory`]; users of higher degree then cache strictly less.
pub fn rs_placement(
    graph: &Graph,
    decomposition: &RsDecomposition,
    library: &NetworkParams,
) -> Result<CacheAssignment> {
    let n = graph.vertices();
    if library.users() != n {
        return Err(Error::InvalidParams(format!(
            "library has {} users, graph has {n} vertices",
            library.users()
        )));
    }
    let required = graph_memory(graph, library.files());
    if library.cache() != &required {
        return Err(Error::MemoryMismatch {
            declared: format_rational(library.cache()),
            required: format_rational(&required),
        });
    }
    let width = 2 * decomposition.gamma - 1;
    let locators: Vec<Locator> = (0..n)
        .flat_map(|v| {
            (0..width).map(move |s| Locator::VertexSlot {
                vertex: v as u32,
                slot: s as u32,
            })
        })
        .collect();
    let per_user = (0..n)
        .map(|u| {
            locators
                .iter()
                .filter(|loc| match loc {
                    Locator::VertexSlot { vertex, .. } => !graph.has_edge(u, *vertex as usize),
                    Locator::Lattice(_) => false,
                })
                .cloned()
                .collect()
        })
        .collect();
    Ok(CacheAssignment::uniform(library, locators, per_user, graph.is_regular()))
}

/// Coded messages of one matching. With `S` its sorted node set, node `u`
/// sends, XORed over `w ∈ S∖{u}`, slot `rank of u in S∖{w}` of vertex
/// `partner(w)` from the file `w` requests.
pub fn matching_messages(
    matching: &Matching,
    index: usize,
    demands: &DemandVector,
    schedule: &mut DeliverySchedule,
) -> Result<()> {
    let nodes = matching.nodes();
    for &u in &nodes {
        let mut receivers = Vec::with_capacity(nodes.len() - 1);
        let mut payload = Vec::with_capacity(nodes.len() - 1);
        for &w in nodes.iter().filter(|&&w| w != u) {
            let partner = matching.partner(w).expect("node of its own matching");
            let slot = nodes.iter().filter(|&&x| x != w && x < u).count();
            receivers.push(w);
            payload.push(PacketId::vertex_slot(demands.file(w), partner, slot));
        }
        schedule.push(u, receivers, payload, GroupLabel::Matching { matching: index })?;
    }
    Ok(())
}

/// Matching messages in decomposition order, then uncoded unicasts over each
/// residual edge: both endpoints send the other all `2γ-1` slots of their own
/// vertex.
pub fn rs_delivery(
    graph: &Graph,
    decomposition: &RsDecomposition,
    demands: &DemandVector,
) -> Result<DeliverySchedule> {
    let n = graph.vertices();
    if demands.len() != n {
        return Err(Error::DemandLength {
            expected: n,
            got: demands.len(),
        });
    }
    let width = 2 * decomposition.gamma - 1;
    let mut schedule = DeliverySchedule::new(rs_packetization(n, decomposition.gamma));
    for (i, m) in decomposition.matchings.iter().enumerate() {
        matching_messages(m, i, demands, &mut schedule)?;
    }
    for &(u, v) in &decomposition.residual {
        for (from, to) in [(u, v), (v, u)] {
            for slot in 0..width {
                schedule.push(
                    from,
                    vec![to],
                    vec![PacketId::vertex_slot(demands.file(to), from, slot)],
                    GroupLabel::Residual { edge: (u, v) },
                )?;
            }
        }
    }
    Ok(schedule)
}

/// `(τ/n)·2γ/(2γ-1)`.
pub fn rs_rate(tau: usize, gamma: usize, vertices: usize) -> Rational {
    ratio(tau as i64, vertices as i64) * ratio(2 * gamma as i64, 2 * gamma as i64 - 1)
}

/// Extra traffic `2|residual|/n` of the unicast fallback.
pub fn residual_surcharge(residual_edges: usize, vertices: usize) -> Rational {
    ratio(2 * residual_edges as i64, vertices as i64)
}

/// Rate of the full schedule for a decomposition.
pub fn rs_total_rate(decomposition: &RsDecomposition, vertices: usize) -> Rational {
    rs_rate(decomposition.tau(), decomposition.gamma, vertices)
        + residual_surcharge(decomposition.residual.len(), vertices)
}

/// Six-cycle with the three opposite-edge matchings, `n = m = 6`, `M = 4`.
pub fn fig5_fixture() -> (Graph, RsDecomposition, NetworkParams) {
    let graph = Graph::cycle(6);
    let decomposition = RsDecomposition {
        gamma: 2,
        matchings: vec![
            Matching::new([(0, 1), (3, 4)]),
            Matching::new([(1, 2), (4, 5)]),
            Matching::new([(2, 3), (5, 0)]),
        ],
        residual: Vec::new(),
    };
    let library = NetworkParams::new(6, 6, int(4)).expect("fixture library is valid");
    (graph, decomposition, library)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::measured_rate;
    use crate::rsgraph::{rs_decompose, verify_rs_property};
    use crate::verify::verify_all;

    fn one_based_packet(p: &PacketId) -> (usize, usize) {
        match p.locator {
            Locator::VertexSlot { vertex, slot } => {
                (p.file as usize + 1, packet_number(vertex as usize, slot as usize, 2))
            }
            Locator::Lattice(_) => panic!("lattice packet in RS schedule"),
        }
    }

    #[test]
    fn six_cycle_cache_of_first_user() {
        let (g, d, lib) = fig5_fixture();
        let cache = rs_placement(&g, &d, &lib).unwrap();
        assert_eq!(cache.packets_per_file(), 18);
        let mut cached: Vec<usize> = cache
            .cache(0)
            .iter()
            .filter(|p| p.file == 3)
            .map(|p| one_based_packet(p).1)
            .collect();
        cached.sort_unstable();
        assert_eq!(cached, vec![1, 2, 3, 7, 8, 9, 10, 11, 12, 13, 14, 15]);
        assert_eq!(cache.cached_amount(0), int(4));
    }

    #[test]
    fn six_cycle_transmission_of_first_user() {
        let (g, d, _) = fig5_fixture();
        let s = rs_delivery(&g, &d, &DemandVector::identity(6)).unwrap();
        assert_eq!(s.len(), 12);
        let first = &s.messages()[0];
        assert_eq!(first.sender, 0);
        let payload: Vec<_> = first.payload.iter().map(one_based_packet).collect();
        assert_eq!(payload, vec![(2, 1), (4, 13), (5, 10)]);
        assert_eq!(measured_rate(&s), ratio(2, 3));
        assert_eq!(rs_rate(3, 2, 6), ratio(2, 3));
    }

    #[test]
    fn six_cycle_verifies() {
        let (g, d, lib) = fig5_fixture();
        assert!(verify_rs_property(&g, &d));
        let demands = DemandVector::identity(6);
        let cache = rs_placement(&g, &d, &lib).unwrap();
        let s = rs_delivery(&g, &d, &demands).unwrap();
        let (v, _) = verify_all(&cache, &s, &demands, &lib).unwrap();
        assert!(v.passed() && v.exactly_once, "{v:?}");
    }

    #[test]
    fn residual_fallback_on_complete_graph() {
        let g = Graph::complete(4);
        let d = rs_decompose(&g, 2);
        let lib = NetworkParams::new(4, 4, graph_memory(&g, 4)).unwrap();
        let demands = DemandVector::identity(4);
        let cache = rs_placement(&g, &d, &lib).unwrap();
        let s = rs_delivery(&g, &d, &demands).unwrap();
        assert_eq!(measured_rate(&s), rs_total_rate(&d, 4));
        assert_eq!(measured_rate(&s), int(3));
        let (v, _) = verify_all(&cache, &s, &demands, &lib).unwrap();
        assert!(v.passed() && v.exactly_once, "{v:?}");
    }

    #[test]
    fn memory_mismatch() {
        let (g, d, _) = fig5_fixture();
        let lib = NetworkParams::new(6, 6, int(3)).unwrap();
        assert!(matches!(rs_placement(&g, &d, &lib), Err(Error::MemoryMismatch { .. })));
    }

    #[test]
    fn numbering_round_trip() {
        for j in 1..=18 {
            let (v, s) = vertex_slot(j, 2);
            assert_eq!(packet_number(v, s, 2), j);
        }
        assert_eq!(vertex_slot(13, 2), (4, 0));
    }

    #[test]
    fn gamma_one_is_unicast() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let d = rs_decompose(&g, 1);
        let s = rs_delivery(&g, &d, &DemandVector::identity(2)).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.messages()[0].payload, vec![PacketId::vertex_slot(1, 0, 0)]);
        assert_eq!(s.messages()[1].payload, vec![PacketId::vertex_slot(0, 1, 0)]);
    }
}
