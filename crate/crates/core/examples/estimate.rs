//! Knuth-style random-probe estimates of search tree sizes.
//!
//!     cargo run --release --example estimate [probes]

use std::sync::Arc;
use std::time::Instant;

use steiner::{estimate_search_size, ActionScenario, SearchConfig};

fn main() -> steiner::Result<()> {
    let probes: usize = std::env::args().nth(1).map_or(200, |s| s.parse().expect("probes must be a number"));
    let cases = [
        ("regular/cyclic(21)", 5),
        ("regular/semidirect(7,3,2)", 3),
        ("cyclic-two-orbit-plus-fixed/cyclic(12)", 4),
        ("regular-plus-fixed/cyclic(30)", 6),
        ("cyclic-two-orbit/cyclic(48)", 6),
    ];
    println!("{:<42} {:>2} {:>12} {:>10} {:>12} {:>8}", "scenario", "k", "nodes", "std err", "solutions", "secs");
    for (descriptor, k) in cases {
        let scenario = Arc::new(ActionScenario::from_descriptor(descriptor)?);
        let start = Instant::now();
        let est = estimate_search_size(&SearchConfig::new(scenario, k), probes, 1)?;
        println!(
            "{descriptor:<42} {k:>2} {:>12.3e} {:>10.1e} {:>12.3e} {:>8.1}",
            est.nodes,
            est.nodes_std_error,
            est.solutions,
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
