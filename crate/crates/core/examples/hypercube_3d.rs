// Nine users on a 3×3×3 lattice. Prints the three messages exchanged inside
// one group and the byte-level decoding report.

use d2d_caching::hypercube::{hc_delivery, hc_placement, lattice_points, HypercubeParams};
use d2d_caching::verify::{simulate_and_decode, DecodeMode};
use d2d_caching::{measured_rate, DemandVector};

pub fn run_example() -> d2d_caching::Result<()> {
    let params = HypercubeParams::symmetric(3)?;
    let library = params.library(9)?;
    let demands = DemandVector::identity(9);
    let cache = hc_placement(&params, &library)?;
    let schedule = hc_delivery(&params, &demands)?;

    let point = vec![2, 1, 2];
    let members = params.group_members(&point);
    println!("group at lattice point {point:?}: users {members:?}");
    for m in schedule.messages() {
        let mut all = m.receivers.clone();
        all.push(m.sender);
        all.sort_unstable();
        if all == members {
            let packets: Vec<String> = m.payload.iter().map(|p| p.to_string()).collect();
            println!("  user {} sends {}", m.sender, packets.join(" ^ "));
        }
    }

    let report = simulate_and_decode(&cache, &schedule, &demands, DecodeMode::CacheOnly)?;
    let summary = report.summary();
    println!(
        "{} groups, {} messages, R = {}",
        lattice_points(3, 3).count(),
        schedule.len(),
        measured_rate(&schedule)
    );
    for user in &summary.users {
        println!("user {}: decoded {} packets, missing {}", user.user, user.decoded, user.missing);
    }
    println!("full recovery {}, byte exact {}", report.full_recovery(), report.byte_exact());
    Ok(())
}

fn main() -> d2d_caching::Result<()> {
    run_example()
}
