//! Time-boxed runs on the large scenarios. Each run reports whether it
//! exhausted its tree; incomplete runs still list what they found.
//!
//!     cargo run --release --example extended_search [seconds per run] [filter]

use std::sync::Arc;
use std::time::Duration;

use steiner::{enumerate_designs, isomorphism_classes, ActionScenario, SearchConfig};

fn main() -> steiner::Result<()> {
    let mut args = std::env::args().skip(1);
    let secs: f64 = args.next().map_or(30.0, |s| s.parse().expect("seconds must be a number"));
    let filter = args.next().unwrap_or_default();
    let targets = [
        ("cyclic-two-orbit-plus-fixed/cyclic(55)", "4 classes"),
        ("cyclic-two-orbit/cyclic(53)", "66 classes"),
        ("regular-plus-fixed/cyclic(125)", "8 classes"),
        ("regular-plus-fixed/cyclic(155)", "at least 16 classes"),
        ("frobenius-57-19-19-1/semidirect(19,3,7,row-major)", "at least 4 classes"),
    ];
    for (descriptor, known) in targets {
        if !descriptor.contains(&filter) {
            continue;
        }
        let scenario = Arc::new(ActionScenario::from_descriptor(descriptor)?);
        let mut config = SearchConfig::new(scenario, 6);
        config.time_budget = Some(Duration::from_secs_f64(secs));
        config.jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
        let out = enumerate_designs(&config)?;
        let designs = out.systems.iter().map(|s| s.expand()).collect::<steiner::Result<Vec<_>>>()?;
        let classes = isomorphism_classes(&designs)?;
        println!(
            "{descriptor}: {} systems, {} classes, {} nodes, {} ({known} expected)",
            designs.len(),
            classes.len(),
            out.nodes,
            if out.exhaustive { "complete" } else { "time budget hit" }
        );
    }
    Ok(())
}
