//! Mills' S(2,6,96): parse the base blocks, expand under Z48 acting on two
//! orbits, verify, and compute the isomorphism invariants.
//!
//!     cargo run --release --example mills_design [out.toml]

use std::sync::Arc;

use steiner::{
    automorphism_count, fingerprint, verify_steiner, ActionScenario, BaseBlockSystem, DesignFile, Fingerprint,
    ParseMode,
};

const MILLS: &str = "[[0, 8, 16, 24, 32, 40], [0', 8', 16', 24', 32', 40'], \
    [0, 1, 3, 13, 28, 0'], [0, 4, 11, 17', 36', 38'], [0, 5, 19, 1', 24', 42'], \
    [0, 9, 26, 4', 7', 40'], [0, 6, 8', 9', 18', 22'], [0, 18, 11', 28', 33', 39']]";

fn main() -> steiner::Result<()> {
    let scenario = Arc::new(ActionScenario::from_descriptor("cyclic-two-orbit/cyclic(48)")?);
    let classes = scenario.pair_classes();
    println!("v = {}, |G| = {}, pair classes = {}", scenario.v(), scenario.order(), classes.count());

    let system = BaseBlockSystem::parse(scenario.clone(), MILLS, ParseMode::Strict)?;
    println!("orbit sizes of the base blocks: {:?}", system.orbit_profile());
    let design = system.expand()?;
    let report = verify_steiner(&design);
    println!("b = {}, r = {:?}, Steiner: {}", report.b, report.r, report.pass);

    let f = fingerprint(&design)?;
    println!("fingerprint {f}");
    println!(
        "total {} (expected {})",
        f.total(),
        Fingerprint::expected_total(design.v(), design.k(), design.b())
    );
    println!("|Aut| = {}", automorphism_count(&design)?);

    // dropping a block breaks the Steiner property in a visible way
    let report = verify_steiner(&design.without_block(0));
    println!("without one block: pass = {}, uncovered pairs = {}", report.pass, report.uncovered.len());

    if let Some(path) = std::env::args().nth(1) {
        DesignFile::from_system(&system).write(path.as_ref())?;
        println!("wrote {path}");
    }
    Ok(())
}
