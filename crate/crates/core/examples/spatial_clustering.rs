// 81 users on a 9×9 grid, split into nine 3×3 clusters. Checks that the
// reuse sets can be active at once under the protocol model, runs the
// hypercube scheme inside every cluster and prints the throughput figures.

use d2d_caching::hypercube::HypercubeParams;
use d2d_caching::model::{format_rational, int, ratio};
use d2d_caching::spatial::{
    build_reuse_sets, clustered_hc_delivery, clustered_throughput_hc, hc_gaps, packetization_reduction,
    reuse_factor, GridNetwork, ProtocolParams,
};
use d2d_caching::{DemandVector, NetworkParams};

pub fn run_example() -> d2d_caching::Result<()> {
    let grid = GridNetwork::new(9)?;
    let protocol = ProtocolParams::new(ratio(2, 81), int(1), int(1))?;
    println!("reuse factor from the guard zone: {}", reuse_factor(&protocol.delta));

    let clustering = build_reuse_sets(&grid, 9, &protocol, Some(4))?;
    for (i, set) in clustering.reuse_sets().iter().enumerate() {
        println!("reuse set {i}: clusters {set:?}");
    }
    println!("all reuse sets interference free: {}", clustering.feasible);

    let library = NetworkParams::new(81, 81, int(27))?;
    let runs = clustered_hc_delivery(&clustering, &library, &DemandVector::identity(81))?;
    for run in &runs {
        println!(
            "cluster {}: R = {}, verified = {}",
            run.cluster,
            format_rational(&run.rate),
            run.verdicts.passed() && run.verdicts.exactly_once
        );
    }

    let cluster = HypercubeParams::symmetric(3)?;
    let hc = clustered_throughput_hc(&cluster, &int(1), clustering.reuse_factor);
    println!(
        "per-user throughput {} (K_c = {}), packetization cut by {}",
        format_rational(&hc.throughput),
        hc.packetization,
        packetization_reduction(3, 81, 9)?
    );
    let gaps = hc_gaps(81, 9, &int(3), &int(1), &int(1), clustering.reuse_factor)?;
    println!(
        "rate gap {}, throughput gap {}, clustering helps: {}",
        format_rational(&gaps.rate_gap),
        format_rational(&gaps.throughput_gap),
        gaps.clustering_helps
    );
    Ok(())
}

fn main() -> d2d_caching::Result<()> {
    run_example()
}
