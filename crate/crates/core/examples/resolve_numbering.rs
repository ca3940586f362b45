//! Tries every candidate element numbering on the printed base blocks of
//! each catalog family and counts which ones expand to a Steiner system.
//!
//!     cargo run --release --example resolve_numbering

use steiner::catalog::family_entries;
use steiner::{resolve_numbering, FAMILIES};

fn main() -> steiner::Result<()> {
    for family in FAMILIES {
        let candidates = family.candidate_specs();
        let entries: Vec<_> = family_entries(family.id).collect();
        println!("{} ({} entries)", family.id, entries.len());
        if candidates.is_empty() {
            println!("    no constructible candidate group");
            continue;
        }
        for spec in &candidates {
            let mut passed = 0;
            let mut sample = None;
            for entry in &entries {
                let out = resolve_numbering(std::slice::from_ref(spec), family.kind, &entry.base_blocks)?;
                if out.resolved.is_some() {
                    passed += 1;
                } else if sample.is_none() {
                    sample = out.attempts.into_iter().next().map(|a| a.detail);
                }
            }
            print!("    {spec}: {passed}/{} verify", entries.len());
            match sample {
                Some(detail) => println!("  (e.g. {detail})"),
                None => println!(),
            }
        }
    }
    Ok(())
}
