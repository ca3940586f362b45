use std::sync::Arc;

use proptest::prelude::*;
use steiner::notation::resolve_block;
use steiner::{catalog, emit_block, emit_blocks, parse_blocks, parse_labels, ActionScenario, Error, ParseMode, PointSpace};

fn space(descriptor: &str) -> PointSpace {
    ActionScenario::from_descriptor(descriptor).unwrap().space().clone()
}

#[test]
fn mills_blocks_parse_over_two_orbits() {
    let s = space("cyclic-two-orbit/cyclic(48)");
    let parsed = parse_blocks("[[0, 1, 3, 13, 28, 0'], [0, 18, 11', 28', 33', 39']]", &s, ParseMode::Strict, Some(6)).unwrap();
    assert_eq!(parsed.blocks, vec![vec![0, 1, 3, 13, 28, 48], vec![0, 18, 59, 76, 81, 87]]);
}

#[test]
fn infinity_is_the_last_point() {
    let s = space("regular-plus-fixed/cyclic(155)");
    for text in ["[0, 15, 21, 37, 73, ∞]", "[0, 15, 21, 37, 73, inf]", r"[0, 15, 21, 37, 73, $\infty$]"] {
        let parsed = parse_blocks(text, &s, ParseMode::Strict, Some(6)).unwrap();
        assert_eq!(parsed.blocks, vec![vec![0, 15, 21, 37, 73, 155]], "{text}");
    }
    assert_eq!(emit_block(&[155, 0], &s), "[0, ∞]");
}

#[test]
fn too_many_primes_is_an_error() {
    let s = space("frobenius-57-19-19-1/semidirect(19,3,7,row-major)");
    let err = parse_blocks("[0, 3''']", &s, ParseMode::Strict, None).unwrap_err();
    assert!(matches!(err, Error::Parse { .. } | Error::Scenario(_)), "{err}");
    assert!(err.to_string().contains("prime depth"), "{err}");
}

#[test]
fn malformed_lists_are_rejected() {
    let s = space("regular/cyclic(13)");
    for bad in ["[[0, 1, 3]", "[0, 1, 1]", "[0, 13]", "[[0, 1], [x]]", "[0,, 1]"] {
        assert!(parse_blocks(bad, &s, ParseMode::Strict, None).is_err(), "{bad}");
    }
    // wrong block size is an error when strict and a warning when lenient
    assert!(parse_blocks("[[0, 1, 3], [0, 4]]", &s, ParseMode::Strict, Some(3)).is_err());
    let lenient = parse_blocks("[[0, 1, 3], [0, 4]]", &s, ParseMode::Lenient, Some(3)).unwrap();
    assert_eq!(lenient.warnings.len(), 1);
}

#[test]
fn lenient_mode_strips_typesetting() {
    let s = space("cyclic-two-orbit/cyclic(48)");
    let text = r"$[[0, 1, 3, 13, 28, 0’], \newline [0, 18, 11', 28',\quad 33', 39']]$";
    assert!(parse_blocks(text, &s, ParseMode::Strict, None).is_err());
    let parsed = parse_blocks(text, &s, ParseMode::Lenient, None).unwrap();
    assert_eq!(parsed.blocks.len(), 2);
}

#[test]
fn empty_list_emits_brackets() {
    let s = space("regular/cyclic(7)");
    assert_eq!(emit_blocks(&[], &s), "[]");
    assert!(parse_blocks("[]", &s, ParseMode::Strict, None).unwrap().blocks.is_empty());
}

#[test]
fn every_catalog_entry_round_trips() {
    for e in catalog() {
        let space = e.label_space();
        let text = e.blocks_text();
        let labels = parse_labels(&text, ParseMode::Strict).unwrap();
        assert_eq!(labels, e.base_blocks, "{}", e.id);
        let blocks: Vec<Vec<usize>> = labels.iter().map(|b| resolve_block(b, &space).unwrap()).collect();
        assert_eq!(emit_blocks(&blocks, &space), text, "{}", e.id);
    }
}

proptest! {
    #[test]
    fn emit_then_parse_is_identity(
        n in 3usize..60,
        kind in 0usize..3,
        raw in proptest::collection::vec(proptest::collection::btree_set(any::<usize>(), 1..7), 0..6),
    ) {
        let descriptor = match kind {
            0 => format!("regular-plus-fixed/cyclic({n})"),
            1 => format!("cyclic-two-orbit/cyclic({n})"),
            _ => format!("cyclic-two-orbit-plus-fixed/cyclic({n})"),
        };
        let s = Arc::new(ActionScenario::from_descriptor(&descriptor).unwrap());
        let v = s.v();
        let mut blocks: Vec<Vec<usize>> = raw
            .iter()
            .map(|b| {
                let set: std::collections::BTreeSet<usize> = b.iter().map(|p| p % v).collect();
                set.into_iter().collect()
            })
            .collect();
        blocks.retain(|b: &Vec<usize>| !b.is_empty());
        let text = emit_blocks(&blocks, s.space());
        let back = parse_blocks(&text, s.space(), ParseMode::Strict, None).unwrap().blocks;
        prop_assert_eq!(back, blocks);
    }
}
