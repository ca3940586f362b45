//! Searches the part of the Z48 two-orbit tree that contains Mills'
//! design, after estimating how large the whole tree is.
//!
//! Forcing the first `n` base blocks restricts the search to one subtree;
//! smaller `n` means a larger, slower subtree.
//!
//!     cargo run --release --example mills_uniqueness [n]

use std::sync::Arc;

use steiner::{
    are_isomorphic, catalog_lookup, enumerate_designs, estimate_search_size, isomorphism_classes, IsoOutcome,
    SearchConfig,
};

fn main() -> steiner::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(4, |s| s.parse().expect("n must be a number"));
    let mills = catalog_lookup("S266-Z48-two-orbit-01")?.system(None)?;
    let scenario = Arc::clone(mills.scenario());
    let reference = mills.expand()?;

    let whole = estimate_search_size(&SearchConfig::new(scenario.clone(), 6), 100, 1)?;
    println!("whole tree: about {:.1e} nodes (+- {:.0e})", whole.nodes, whole.nodes_std_error);

    let mut config = SearchConfig::new(scenario.clone(), 6);
    config.forced = mills.base_blocks()[..n.min(mills.base_blocks().len())].to_vec();
    let est = estimate_search_size(&config, 300, 1)?;
    println!("subtree with {n} forced blocks: about {:.1e} nodes", est.nodes);

    let out = enumerate_designs(&config)?;
    let designs = out.systems.iter().map(|s| s.expand()).collect::<steiner::Result<Vec<_>>>()?;
    let classes = isomorphism_classes(&designs)?;
    println!("searched {} nodes in {:.2?}: {} systems, {} classes", out.nodes, out.elapsed, designs.len(), classes.len());
    for c in &classes {
        let iso = matches!(are_isomorphic(&designs[c.representative], &reference)?, IsoOutcome::Isomorphic(_));
        println!("  class of {} systems, isomorphic to Mills: {iso}", c.members.len());
    }
    Ok(())
}
