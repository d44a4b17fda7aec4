// Packetization and rate against the prior scheme that multicasts to every
// `t`-subset of users.

use d2d_caching::hypercube::{compare_to_groupcast, hc_rate, HypercubeParams};
use d2d_caching::model::{format_rational, to_f64};

pub fn run_example() -> d2d_caching::Result<()> {
    println!("{:>3} {:>3} {:>4} {:>22} {:>30} {:>10}", "q", "c", "n", "K (hypercube)", "K' (groupcast)", "R/R'");
    for (q, c) in [(2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (8, 1), (5, 2), (7, 2), (9, 4)] {
        let params = HypercubeParams::with_multiplicity(q, c)?;
        let report = compare_to_groupcast(&params);
        println!(
            "{q:>3} {c:>3} {:>4} {:>22} {:>30} {:>10}",
            params.users(),
            params.packetization(),
            report.k_prior,
            format_rational(&(hc_rate(&params) / &report.r_prior)),
        );
        println!("    K'/K = {:.3e}", to_f64(&report.packetization_ratio));
    }
    Ok(())
}

fn main() -> d2d_caching::Result<()> {
    run_example()
}
