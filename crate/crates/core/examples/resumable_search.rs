//! Interrupts a search with a node budget, resumes it from the checkpoint,
//! and checks the result against an uninterrupted run and a branch split.
//!
//!     cargo run --release --example resumable_search [descriptor k]

use std::collections::BTreeSet;
use std::sync::Arc;

use steiner::search::found_path;
use steiner::{enumerate_designs, ActionScenario, Branch, SearchConfig, SearchOutcome};

fn keys(out: &SearchOutcome) -> BTreeSet<Vec<Vec<usize>>> {
    out.systems.iter().map(|s| s.base_blocks().to_vec()).collect()
}

fn main() -> steiner::Result<()> {
    let mut args = std::env::args().skip(1);
    let descriptor = args.next().unwrap_or_else(|| "regular/cyclic(31)".into());
    let k: usize = args.next().map_or(3, |s| s.parse().expect("k must be a number"));
    let scenario = Arc::new(ActionScenario::from_descriptor(&descriptor)?);

    let full = enumerate_designs(&SearchConfig::new(scenario.clone(), k))?;
    println!("uninterrupted: {} systems, {} nodes", full.systems.len(), full.nodes);

    let dir = std::env::temp_dir().join(format!("steiner-resume-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let checkpoint = dir.join("search.ckpt");

    let mut config = SearchConfig::new(scenario.clone(), k);
    config.checkpoint = Some(checkpoint.clone());
    config.node_budget = Some(full.nodes / 3 + 1);
    let mut round = 0;
    let resumed = loop {
        round += 1;
        let out = enumerate_designs(&config)?;
        println!(
            "round {round}: {} systems so far, {} prefixes already done, exhaustive: {}",
            out.systems.len(),
            out.resumed_prefixes,
            out.exhaustive
        );
        if out.exhaustive {
            break out;
        }
    };
    let lines = std::fs::read_to_string(&checkpoint)?.lines().count();
    let found = std::fs::read_to_string(found_path(&checkpoint))?.lines().count();
    println!("checkpoint holds {lines} prefixes and {found} recorded systems");
    println!("resumed result equals uninterrupted: {}", keys(&resumed) == keys(&full));

    let n = 3;
    let mut union = BTreeSet::new();
    for index in 0..n {
        let mut config = SearchConfig::new(scenario.clone(), k);
        config.branch = Branch { index, total: n };
        let part = enumerate_designs(&config)?;
        println!("branch {index}/{n}: {} systems from {} root branches", part.systems.len(), part.selected_branches);
        union.extend(keys(&part));
    }
    println!("branch union equals uninterrupted: {}", union == keys(&full));
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
