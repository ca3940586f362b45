mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use steiner::{
    are_isomorphic, automorphism_count, canonical_certificate, catalog_lookup, fingerprint, ActionScenario,
    BaseBlockSystem, Design, Fingerprint, IsoOutcome, ParseMode,
};

fn cyclic(descriptor: &str, blocks: &str) -> Design {
    let s = Arc::new(ActionScenario::from_descriptor(descriptor).unwrap());
    BaseBlockSystem::parse(s, blocks, ParseMode::Strict).unwrap().expand().unwrap()
}

fn ag23() -> Design {
    let mut lines: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| 3 * x + y).collect()).collect();
    for m in 0..3 {
        for c in 0..3 {
            lines.push((0..3).map(|x| 3 * x + (m * x + c) % 3).collect());
        }
    }
    Design::new(9, 3, lines).unwrap()
}

fn small_designs() -> Vec<Design> {
    vec![
        cyclic("regular/cyclic(7)", "[0, 1, 3]"),
        ag23(),
        cyclic("regular/cyclic(13)", "[[0, 1, 4], [0, 2, 7]]"),
        cyclic("regular/cyclic(13)", "[0, 1, 3, 9]"),
        cyclic("regular/cyclic(15)", "[[0, 1, 4], [0, 2, 8], [0, 5, 10]]"),
        cyclic("regular/cyclic(15)", "[[0, 1, 4], [0, 2, 9], [0, 5, 10]]"),
        cyclic("regular/cyclic(21)", "[3, 6, 7, 12, 14]"),
        cyclic("regular-plus-fixed/cyclic(8)", "[[0, 1, 3], [0, 4, ∞]]"),
    ]
}

#[test]
fn classical_automorphism_group_orders() {
    assert_eq!(automorphism_count(&cyclic("regular/cyclic(7)", "[0, 1, 3]")).unwrap(), 168);
    assert_eq!(automorphism_count(&ag23()).unwrap(), 432);
    assert_eq!(automorphism_count(&cyclic("regular/cyclic(13)", "[0, 1, 3, 9]")).unwrap(), 5616);
    assert_eq!(automorphism_count(&cyclic("regular/cyclic(21)", "[3, 6, 7, 12, 14]")).unwrap(), 120_960);
    // PG(3,2) as a cyclic STS(15)
    assert_eq!(automorphism_count(&cyclic("regular/cyclic(15)", "[[0, 1, 4], [0, 2, 8], [0, 5, 10]]")).unwrap(), 20_160);
}

#[test]
fn generating_group_divides_the_automorphism_count() {
    for (id, order) in [("S266-Z48-two-orbit-01", 48u128), ("S266-Z55-three-orbit-02", 55), ("S266-F57-four-orbit-03", 57)] {
        let d = catalog_lookup(id).unwrap().expand(None).unwrap();
        let aut = automorphism_count(&d).unwrap();
        assert_eq!(aut % order, 0, "{id}: |Aut| = {aut}");
    }
}

#[test]
fn census_matches_direct_transcription() {
    let mut designs = small_designs();
    designs.push(catalog_lookup("S266-Z48-two-orbit-01").unwrap().expand(None).unwrap());
    for d in designs {
        let fast = fingerprint(&d).unwrap();
        let slow = Fingerprint::from_counts(common::naive_fingerprint(&d));
        assert_eq!(fast, slow, "v = {}", d.v());
        assert_eq!(fast.total(), Fingerprint::expected_total(d.v(), d.k(), d.b()));
    }
}

#[test]
fn fingerprint_text_round_trips() {
    let f: Fingerprint = "{0=530, 1=41128, 2=521202, 3=1957396, 4=1931744}".parse().unwrap();
    assert_eq!(f.total(), 4_452_000);
    assert_eq!(f.to_string().parse::<Fingerprint>().unwrap(), f);
    assert_eq!(r"\{1=2, 3=4\}".parse::<Fingerprint>().unwrap().get(3), 4);
    assert!("{1=2, 1=3}".parse::<Fingerprint>().is_err());
}

#[test]
fn non_steiner_input_is_rejected() {
    let d = cyclic("regular/cyclic(13)", "[0, 1, 3, 9]").without_block(0);
    assert!(fingerprint(&d).is_err());
}

#[test]
fn certificates_separate_the_cyclic_sts15s() {
    let a = cyclic("regular/cyclic(15)", "[[0, 1, 4], [0, 2, 8], [0, 5, 10]]");
    let b = cyclic("regular/cyclic(15)", "[[0, 1, 4], [0, 2, 9], [0, 5, 10]]");
    assert_ne!(canonical_certificate(&a).unwrap().design, canonical_certificate(&b).unwrap().design);
    assert!(matches!(are_isomorphic(&a, &b).unwrap(), IsoOutcome::NonIsomorphic(_)));
    let fano = cyclic("regular/cyclic(7)", "[0, 1, 3]");
    match are_isomorphic(&a, &fano).unwrap() {
        IsoOutcome::NonIsomorphic(reason) => assert!(reason.starts_with("parameter mismatch"), "{reason}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn relabeled_catalog_design_keeps_its_invariants() {
    let d = catalog_lookup("S266-F57-four-orbit-02").unwrap().expand(None).unwrap();
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let e = d.relabel(&common::random_permutation(d.v(), &mut rng));
    assert_eq!(fingerprint(&d).unwrap(), fingerprint(&e).unwrap());
    assert_eq!(canonical_certificate(&d).unwrap().design, canonical_certificate(&e).unwrap().design);
    match are_isomorphic(&d, &e).unwrap() {
        IsoOutcome::Isomorphic(map) => assert_eq!(d.relabel(&map), e),
        other => panic!("expected an isomorphism, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariants_ignore_relabeling(which in 0usize..8, seed in any::<u64>()) {
        let d = &small_designs()[which];
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let e = d.relabel(&common::random_permutation(d.v(), &mut rng));
        prop_assert_eq!(fingerprint(d).unwrap(), fingerprint(&e).unwrap());
        let (cd, ce) = (canonical_certificate(d).unwrap(), canonical_certificate(&e).unwrap());
        prop_assert_eq!(&cd.design, &ce.design);
        // the labeling really maps the input onto the canonical form
        prop_assert_eq!(&e.relabel(&ce.labeling), &ce.design);
        prop_assert_eq!(automorphism_count(d).unwrap(), automorphism_count(&e).unwrap());
    }

    #[test]
    fn isomorphism_is_symmetric_and_witnessed(a in 0usize..8, b in 0usize..8, seed in any::<u64>()) {
        let designs = small_designs();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let x = &designs[a];
        let y = designs[b].relabel(&common::random_permutation(designs[b].v(), &mut rng));
        let xy = are_isomorphic(x, &y).unwrap();
        let yx = are_isomorphic(&y, x).unwrap();
        prop_assert_eq!(xy.is_isomorphic(), yx.is_isomorphic());
        if let IsoOutcome::Isomorphic(map) = xy {
            prop_assert_eq!(x.relabel(&map), y.clone());
        }
        if a == b {
            prop_assert!(yx.is_isomorphic());
        }
    }
}
