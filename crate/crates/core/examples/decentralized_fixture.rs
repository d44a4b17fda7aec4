// 32 users each pick one of six packet sets (two rows of three). Prints the
// round log, then runs the full delivery and decodes it.

use d2d_caching::decentralized::{
    dec_cache_assignment, dec_delivery, DecentralizedParams, PlacementCounts,
};
use d2d_caching::model::format_rational;
use d2d_caching::verify::verify_all;
use d2d_caching::DemandVector;

pub fn run_example() -> d2d_caching::Result<()> {
    let params = DecentralizedParams::new(32, 3, 2)?;
    let counts = PlacementCounts::from_counts(&params, &[vec![6, 3, 6], vec![7, 6, 4]])?;
    let library = params.library(32)?;
    let demands = DemandVector::identity(32);

    let (log, schedule) = dec_delivery(&params, &counts, &demands)?;
    for (i, round) in log.rounds.iter().enumerate() {
        println!(
            "round {i}: x = {}, empty sets per row {:?}, skipped groups {}, rate {}",
            round.multiplier,
            round.zero_counts,
            round.skipped_groups,
            format_rational(&round.rate)
        );
    }
    println!("total rate {}", format_rational(&log.total_rate));

    let cache = dec_cache_assignment(&params, &counts, &library)?;
    let (verdicts, report) = verify_all(&cache, &schedule, &demands, &library)?;
    println!(
        "{} messages, all users recovered: {}, repeat deliveries to stand-ins: {}",
        schedule.len(),
        report.full_recovery(),
        verdicts.redundant_deliveries
    );
    Ok(())
}

fn main() -> d2d_caching::Result<()> {
    run_example()
}
