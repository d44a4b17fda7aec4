// Six users on a 6-cycle, split into three induced matchings of two edges.
// Each file is cut into 18 packets instead of the 60 needed when every
// 4-subset of users forms a multicast group.

use d2d_caching::model::{format_rational, groupcast_baseline};
use d2d_caching::rsgraph::{fig5_fixture, packet_number, rs_delivery, rs_placement, verify_rs_property};
use d2d_caching::verify::verify_all;
use d2d_caching::{measured_rate, DemandVector, Locator, PacketId};

fn label(p: &PacketId, gamma: usize) -> String {
    match p.locator {
        Locator::VertexSlot { vertex, slot } => {
            format!("W[{}][{}]", p.file, packet_number(vertex as usize, slot as usize, gamma))
        }
        Locator::Lattice(_) => p.to_string(),
    }
}

pub fn run_example() -> d2d_caching::Result<()> {
    let (graph, decomposition, library) = fig5_fixture();
    println!("induced matchings: {:?}", decomposition.matchings.iter().map(|m| m.edges()).collect::<Vec<_>>());
    println!("valid decomposition: {}", verify_rs_property(&graph, &decomposition));

    let demands = DemandVector::identity(6);
    let cache = rs_placement(&graph, &decomposition, &library)?;
    let schedule = rs_delivery(&graph, &decomposition, &demands)?;
    let gamma = decomposition.gamma;

    let mut cached: Vec<usize> = cache
        .cache(0)
        .iter()
        .filter(|p| p.file == 0)
        .map(|p| match p.locator {
            Locator::VertexSlot { vertex, slot } => packet_number(vertex as usize, slot as usize, gamma),
            Locator::Lattice(_) => 0,
        })
        .collect();
    cached.sort_unstable();
    println!("user 0 caches packets {cached:?} of every file");

    for m in schedule.messages() {
        let packets: Vec<String> = m.payload.iter().map(|p| label(p, gamma)).collect();
        println!("{} -> {:?}: {}", m.sender, m.receivers, packets.join(" ^ "));
    }

    let (verdicts, _) = verify_all(&cache, &schedule, &demands, &library)?;
    let (k_prior, r_prior) = groupcast_baseline(&library)?;
    println!(
        "K = {}, R = {} (prior scheme K' = {k_prior}, R' = {}), verified = {}",
        schedule.packets_per_file(),
        format_rational(&measured_rate(&schedule)),
        format_rational(&r_prior),
        verdicts.passed() && verdicts.exactly_once
    );
    Ok(())
}

fn main() -> d2d_caching::Result<()> {
    run_example()
}
