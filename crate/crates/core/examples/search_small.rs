//! Exhaustive search on small scenarios, cross-checked against the
//! brute-force oracle, then reduced to isomorphism classes.
//!
//!     cargo run --release --example search_small

use std::collections::BTreeSet;
use std::sync::Arc;

use steiner::{brute_force_oracle, enumerate_designs, isomorphism_classes, ActionScenario, SearchConfig};

fn main() -> steiner::Result<()> {
    let cases = [
        ("regular-plus-fixed/cyclic(8)", 3),
        ("regular/cyclic(13)", 3),
        ("regular/cyclic(13)", 4),
        ("regular/cyclic(15)", 3),
        ("regular/cyclic(21)", 5),
        ("regular/semidirect(7,3,2)", 3),
        ("cyclic-two-orbit/cyclic(8)", 4),
        ("cyclic-two-orbit-plus-fixed/cyclic(12)", 4),
        ("regular-plus-fixed/cyclic(20)", 5),
    ];
    println!("{:<42} {:>2} {:>8} {:>8} {:>7} {:>8}", "scenario", "k", "search", "oracle", "equal", "classes");
    for (descriptor, k) in cases {
        let scenario = Arc::new(ActionScenario::from_descriptor(descriptor)?);
        let found = enumerate_designs(&SearchConfig::new(scenario.clone(), k))?;
        let oracle = brute_force_oracle(&scenario, k)?;
        let a: BTreeSet<_> = found.systems.iter().map(|s| s.base_blocks().to_vec()).collect();
        let b: BTreeSet<_> = oracle.iter().map(|s| s.canonical().base_blocks().to_vec()).collect();
        let designs = found.systems.iter().map(|s| s.expand()).collect::<steiner::Result<Vec<_>>>()?;
        let classes = isomorphism_classes(&designs)?;
        println!(
            "{descriptor:<42} {k:>2} {:>8} {:>8} {:>7} {:>8}",
            a.len(),
            b.len(),
            a == b,
            classes.len()
        );
    }
    Ok(())
}
