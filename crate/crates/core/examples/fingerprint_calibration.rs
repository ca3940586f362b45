//! Expands every catalog entry whose numbering is known, verifies it, and
//! compares the computed pair-block census with the printed buckets.
//!
//!     cargo run --release --example fingerprint_calibration

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use steiner::catalog::family_entries;
use steiner::{fingerprint, verify_steiner, Fingerprint, FAMILIES};

fn main() -> steiner::Result<()> {
    let start = Instant::now();
    println!("{:<26} {:>7} {:>9} {:>8} {:>9}", "family", "entries", "verified", "totals", "buckets");
    for family in FAMILIES {
        let entries: Vec<_> = family_entries(family.id).collect();
        let Some(spec) = family.group_spec() else {
            println!("{:<26} {:>7}   import required, printed data only", family.id, entries.len());
            continue;
        };
        let rows = entries
            .par_iter()
            .map(|e| {
                let design = e.expand(None)?;
                let pass = verify_steiner(&design).pass;
                let f = fingerprint(&design)?;
                let total_ok = f.total() == Fingerprint::expected_total(design.v(), design.k(), design.b())
                    && f.total() == e.printed_fingerprint.total();
                Ok((e.id.clone(), pass, total_ok, f == e.printed_fingerprint, f))
            })
            .collect::<steiner::Result<Vec<_>>>()?;
        let count = |pick: fn(&(String, bool, bool, bool, Fingerprint)) -> bool| rows.iter().filter(|r| pick(r)).count();
        println!(
            "{:<26} {:>7} {:>9} {:>8} {:>9}",
            family.id,
            rows.len(),
            count(|r| r.1),
            count(|r| r.2),
            count(|r| r.3)
        );
        let mut distinct: BTreeMap<&Fingerprint, usize> = BTreeMap::new();
        for r in &rows {
            *distinct.entry(&r.4).or_default() += 1;
            if !r.3 {
                let printed = &steiner::catalog_lookup(&r.0)?.printed_fingerprint;
                println!("    {} mismatch: computed {} printed {}", r.0, r.4, printed);
            }
        }
        println!("    {} distinct fingerprints, under group {spec}", distinct.len());
    }
    println!("done in {:.1?}", start.elapsed());
    Ok(())
}
