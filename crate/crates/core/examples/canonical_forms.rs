//! Canonical labeling and automorphism counts on classical designs, plus
//! an isomorphism check against a randomly relabeled copy.
//!
//!     cargo run --release --example canonical_forms

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use steiner::{
    are_isomorphic, automorphism_count, canonical_certificate, ActionScenario, BaseBlockSystem, Design, IsoOutcome,
    ParseMode,
};

fn cyclic(descriptor: &str, blocks: &str) -> steiner::Result<Design> {
    let s = Arc::new(ActionScenario::from_descriptor(descriptor)?);
    BaseBlockSystem::parse(s, blocks, ParseMode::Strict)?.expand()
}

/// Lines of the affine plane over Z_3.
fn ag23() -> steiner::Result<Design> {
    let mut lines = Vec::new();
    let pt = |x: usize, y: usize| 3 * x + y;
    for x in 0..3 {
        lines.push((0..3).map(|y| pt(x, y)).collect::<Vec<_>>());
    }
    for m in 0..3 {
        for c in 0..3 {
            lines.push((0..3).map(|x| pt(x, (m * x + c) % 3)).collect());
        }
    }
    Design::new(9, 3, lines)
}

fn main() -> steiner::Result<()> {
    let designs = [
        ("Fano plane PG(2,2)", cyclic("regular/cyclic(7)", "[0, 1, 3]")?),
        ("AG(2,3)", ag23()?),
        ("PG(2,3)", cyclic("regular/cyclic(13)", "[0, 1, 3, 9]")?),
        ("PG(2,4)", cyclic("regular/cyclic(21)", "[3, 6, 7, 12, 14]")?),
        ("STS(15), cyclic", cyclic("regular/cyclic(15)", "[[0, 1, 4], [0, 2, 8], [0, 5, 10]]")?),
    ];
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for (name, d) in &designs {
        let aut = automorphism_count(d)?;
        let cert = canonical_certificate(d)?;

        let mut perm: Vec<usize> = (0..d.v()).collect();
        perm.shuffle(&mut rng);
        let shuffled = d.relabel(&perm);
        let same = canonical_certificate(&shuffled)?.design == cert.design;
        let iso = matches!(are_isomorphic(d, &shuffled)?, IsoOutcome::Isomorphic(_));
        println!(
            "{name:<20} v={:<3} b={:<3} |Aut| = {aut:<8} certificate stable: {same}, isomorphic to relabeling: {iso}",
            d.v(),
            d.b()
        );
    }

    // the two cyclic STS(13) orbits give isomorphic designs
    let a = cyclic("regular/cyclic(13)", "[[0, 1, 4], [0, 2, 7]]")?;
    let b = cyclic("regular/cyclic(13)", "[[0, 1, 4], [0, 2, 8]]")?;
    match are_isomorphic(&a, &b)? {
        IsoOutcome::Isomorphic(map) => println!("\ncyclic STS(13)s are isomorphic via {map:?}"),
        IsoOutcome::NonIsomorphic(why) => println!("\ncyclic STS(13)s differ: {why}"),
    }
    Ok(())
}
