// Maximum bin load and full coverage for uniformly thrown balls, next to the
// analytic thresholds used to bound the decentralized rate.

use d2d_caching::decentralized::{coverage_probability, max_load_bound, simulate_bins, LoadRegime};

pub fn run_example() -> d2d_caching::Result<()> {
    let trials = 1000;
    for (balls, bins) in [(10_000usize, 6usize), (10_000, 20), (1000, 64)] {
        let k = max_load_bound(balls as f64, bins as f64, 1.1, 2.0, LoadRegime::Mid)?;
        let runs = simulate_bins(balls, bins, trials, 0);
        let within = runs.iter().filter(|t| t.max_load as f64 <= k).count();
        let worst = runs.iter().map(|t| t.max_load).max().unwrap_or(0);
        println!(
            "{balls} balls, {bins} bins: k_α = {k:.1}, max load ≤ k_α in {within}/{trials} trials (worst {worst})"
        );
    }

    for bins in [6usize, 16, 64] {
        let balls = (2.0 * bins as f64 * (bins as f64).ln()).ceil() as usize;
        let floor = coverage_probability(balls as f64, bins as f64, 2.0)?;
        let covered = simulate_bins(balls, bins, trials, 1).iter().filter(|t| t.covered).count();
        println!("{balls} balls, {bins} bins: covered in {covered}/{trials} trials (bound {floor:.4})");
    }
    Ok(())
}

fn main() -> d2d_caching::Result<()> {
    run_example()
}
