// Four users, two files cached per user out of four: the lattice is a 2×2
// square and every transmission is a unicast.

use d2d_caching::hypercube::{hc_delivery, hc_placement, HypercubeParams};
use d2d_caching::verify::verify_all;
use d2d_caching::{measured_rate, DemandVector};

pub fn run_example() -> d2d_caching::Result<()> {
    let params = HypercubeParams::symmetric(2)?;
    let library = params.library(4)?;
    let demands = DemandVector::identity(4);

    let cache = hc_placement(&params, &library)?;
    for user in 0..params.users() {
        let (dim, coord) = params.hyperplane(user);
        println!("user {user} caches coordinate {dim} = {coord}");
    }

    let schedule = hc_delivery(&params, &demands)?;
    for m in schedule.messages() {
        let packets: Vec<String> = m.payload.iter().map(|p| p.to_string()).collect();
        println!("{} -> {:?}: {}", m.sender, m.receivers, packets.join(" ^ "));
    }

    let (verdicts, _) = verify_all(&cache, &schedule, &demands, &library)?;
    println!(
        "K = {}, R = {}, verified = {}",
        params.packetization(),
        measured_rate(&schedule),
        verdicts.passed()
    );
    Ok(())
}

fn main() -> d2d_caching::Result<()> {
    run_example()
}
