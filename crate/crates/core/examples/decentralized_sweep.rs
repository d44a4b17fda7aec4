// Mean decentralized rate over random placements for every valid
// `(n', t')` with `t' ∈ {3, 4}` and `n' ≤ 64` in a network of 1000 users.
// Writes the table as CSV to stdout.
//
// `cargo run --release --example decentralized_sweep -- 1000` sets the
// number of trials per point (default 200).

use d2d_caching::decentralized::{sweep, valid_points, write_sweep_csv};

pub fn run_example() -> d2d_caching::Result<()> {
    let trials = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(200);
    run_with(trials)
}

pub fn run_with(trials: usize) -> d2d_caching::Result<()> {
    let points = valid_points(1000, 64, &[3, 4]);
    let rows = sweep(&points, trials, 0)?;
    write_sweep_csv(&rows, std::io::stdout())?;
    Ok(())
}

fn main() -> d2d_caching::Result<()> {
    run_example()
}
