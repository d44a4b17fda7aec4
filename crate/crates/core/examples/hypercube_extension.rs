// Groups of size `t < q`: each user appears in `c = (q-1)/(t-1)` passes per
// group. Runs every valid `(q, c)` with at most 5⁴ packets and checks the
// exactly-once property.

use d2d_caching::hypercube::{hc_delivery, hc_placement, hc_rate, HypercubeParams};
use d2d_caching::model::distinct_demands;
use d2d_caching::verify::verify_all;
use d2d_caching::measured_rate;

pub fn run_example() -> d2d_caching::Result<()> {
    println!("{:>3} {:>3} {:>3} {:>4} {:>6} {:>8} exactly_once", "q", "t", "c", "n", "K", "R");
    for q in 2..=7u32 {
        for c in 1..q {
            let Ok(params) = HypercubeParams::with_multiplicity(q, c) else {
                continue;
            };
            let Ok(k) = params.enumerable_packetization() else {
                continue;
            };
            if k > 625 {
                continue;
            }
            let files = params.users() + 3;
            let library = params.library(files)?;
            let demands = distinct_demands(params.users(), files, Some(u64::from(q * 10 + c)))?;
            let cache = hc_placement(&params, &library)?;
            let schedule = hc_delivery(&params, &demands)?;
            let (v, _) = verify_all(&cache, &schedule, &demands, &library)?;
            assert_eq!(measured_rate(&schedule), hc_rate(&params));
            println!(
                "{q:>3} {:>3} {c:>3} {:>4} {k:>6} {:>8} {}",
                params.t(),
                params.users(),
                hc_rate(&params).to_string(),
                v.passed() && v.exactly_once
            );
        }
    }
    Ok(())
}

fn main() -> d2d_caching::Result<()> {
    run_example()
}
