// Builds the distance-shell graph on `[Λ]^z`, decomposes it greedily into
// induced matchings and runs the resulting scheme with unicast fallback for
// leftover edges. Also prints the leading-order exponents of the
// construction for a few large `Λ`.

use d2d_caching::model::{format_rational, int};
use d2d_caching::rsgraph::{
    degree_lower_bound, graph_memory, rs_asymptotics, rs_construct, rs_decompose, rs_delivery,
    rs_memory_bound, rs_placement, rs_total_rate, RsConstructionParams,
};
use d2d_caching::verify::verify_all;
use d2d_caching::{measured_rate, DemandVector, NetworkParams};

pub fn run_example() -> d2d_caching::Result<()> {
    for (lambda, z) in [(2, 4), (2, 6), (3, 6)] {
        let params = RsConstructionParams::new(lambda, z)?;
        let graph = rs_construct(&params)?;
        let n = graph.vertices();
        println!(
            "Λ={lambda} z={z}: n={n}, μ={}, edges={}, min degree {} (bound {:.2})",
            format_rational(&params.mu()),
            graph.edge_count(),
            graph.min_degree(),
            degree_lower_bound(lambda as f64, n as f64)
        );
        let bound = rs_memory_bound(&params, n, Some(&graph));
        println!("  cache formula {:.2} of m={n}, feasible {}", bound.formula, bound.feasible);

        if n > 100 {
            continue;
        }
        let gamma = 2;
        let decomposition = rs_decompose(&graph, gamma);
        let memory = graph_memory(&graph, n);
        if memory == int(0) {
            println!("  complete graph: users cache nothing, every edge is residual");
            continue;
        }
        let library = NetworkParams::new(n, n, memory)?;
        let demands = DemandVector::identity(n);
        let cache = rs_placement(&graph, &decomposition, &library)?;
        let schedule = rs_delivery(&graph, &decomposition, &demands)?;
        let (verdicts, _) = verify_all(&cache, &schedule, &demands, &library)?;
        println!(
            "  γ={gamma}: τ={}, residual edges {}, R={} (expected {}), verified {}",
            decomposition.tau(),
            decomposition.residual.len(),
            format_rational(&measured_rate(&schedule)),
            format_rational(&rs_total_rate(&decomposition, n)),
            verdicts.passed()
        );
    }

    println!("\n{:>8} {:>8} {:>8} {:>14}", "Λ", "δ", "f", "gap exponent");
    for lambda in [100.0, 110.25, 120.0, 1000.0] {
        let a = rs_asymptotics(lambda, 1.0);
        println!("{lambda:>8} {:>8.4} {:>8.4} {:>14.4e}", a.delta, a.f, a.gap_exponent);
    }
    Ok(())
}

fn main() -> d2d_caching::Result<()> {
    run_example()
}
