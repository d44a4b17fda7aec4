macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(hypercube_2d, "hypercube_2d.rs");
example!(hypercube_3d, "hypercube_3d.rs");
example!(hypercube_extension, "hypercube_extension.rs");
example!(groupcast_comparison, "groupcast_comparison.rs");
example!(decentralized_fixture, "decentralized_fixture.rs");
example!(decentralized_sweep, "decentralized_sweep.rs");
example!(rs_fig5, "rs_fig5.rs");
example!(rs_construction, "rs_construction.rs");
example!(spatial_clustering, "spatial_clustering.rs");
example!(balls_in_bins, "balls_in_bins.rs");

#[test]
fn hypercube_examples_run() {
    hypercube_2d::run_example().unwrap();
    hypercube_3d::run_example().unwrap();
    hypercube_extension::run_example().unwrap();
    groupcast_comparison::run_example().unwrap();
}

#[test]
fn decentralized_examples_run() {
    decentralized_fixture::run_example().unwrap();
    decentralized_sweep::run_with(5).unwrap();
    balls_in_bins::run_example().unwrap();
}

#[test]
fn graph_examples_run() {
    rs_fig5::run_example().unwrap();
    rs_construction::run_example().unwrap();
}

#[test]
fn spatial_example_runs() {
    spatial_clustering::run_example().unwrap();
}
