mod common;

use proptest::prelude::*;
use steiner::{GroupSpec, GroupTable, TableDiagnostic};

#[test]
fn every_built_group_satisfies_the_axioms() {
    for s in common::built_specs() {
        let g = GroupTable::build(&s.parse().unwrap()).unwrap();
        common::check_group_axioms(&g).unwrap_or_else(|e| panic!("{s}: {e}"));
        assert_eq!(Some(g.order()), s.parse::<GroupSpec>().unwrap().order());
    }
}

#[test]
fn order_thirty_groups_are_pairwise_different() {
    // element order statistics separate the four groups of order 30
    let mut profiles: Vec<Vec<usize>> = ["cyclic(30)", "semidirect(15,2,4)", "semidirect(15,2,11)", "semidirect(15,2,14)"]
        .iter()
        .map(|s| {
            let g = GroupTable::build(&s.parse().unwrap()).unwrap();
            let mut orders: Vec<usize> = (0..30).map(|x| g.element_order(x)).collect();
            orders.sort_unstable();
            orders
        })
        .collect();
    profiles.dedup();
    assert_eq!(profiles.len(), 4);
}

#[test]
fn sl25_has_the_right_shape() {
    let g = GroupTable::build(&GroupSpec::SpecialLinear25).unwrap();
    assert_eq!(g.order(), 120);
    assert!(!g.is_abelian());
    // the only involution of SL(2,5) is -I
    assert_eq!((0..120).filter(|&x| g.element_order(x) == 2).count(), 1);
}

#[test]
fn heisenberg_has_exponent_p() {
    let g = GroupTable::build(&GroupSpec::Heisenberg(3)).unwrap();
    assert!((1..27).all(|x| g.element_order(x) == 3));
    assert!(!g.is_abelian());
}

#[test]
fn invalid_specs_are_rejected() {
    for s in ["cyclic(0)", "semidirect(7,3,3)", "heisenberg(4)", "cyclic(257)", "nonsense(3)", "cyclic(3"] {
        assert!(s.parse::<GroupSpec>().and_then(|g| GroupTable::build(&g)).is_err(), "{s}");
    }
}

#[test]
fn validator_names_the_first_failing_axiom() {
    let not_assoc = vec![
        vec![0, 1, 2, 3, 4],
        vec![1, 0, 3, 4, 2],
        vec![2, 4, 0, 1, 3],
        vec![3, 2, 4, 0, 1],
        vec![4, 3, 1, 2, 0],
    ];
    assert!(matches!(GroupTable::validate(&not_assoc), Err(TableDiagnostic::NotAssociative { .. })));
    let ragged = vec![vec![0, 1], vec![1]];
    assert!(matches!(GroupTable::validate(&ragged), Err(TableDiagnostic::NotSquare { .. })));
    let shifted = vec![vec![1, 0], vec![0, 1]];
    assert!(matches!(GroupTable::validate(&shifted), Err(TableDiagnostic::IdentityNotZero { .. })));
}

fn small_spec() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        (1usize..=64).prop_map(GroupSpec::Cyclic),
        ((1usize..=8), (1usize..=8)).prop_map(|(a, b)| GroupSpec::direct(GroupSpec::Cyclic(a), GroupSpec::Cyclic(b))),
        // Z_m x| Z_c for every multiplier of order dividing c
        ((2usize..=20), (1usize..=6)).prop_flat_map(|(m, c)| {
            let ts: Vec<usize> = (1..m).filter(|&t| pow_mod(t, c, m) == 1).collect();
            proptest::sample::select(ts).prop_map(move |t| GroupSpec::semidirect(m, c, t))
        }),
    ]
}

fn pow_mod(b: usize, e: usize, m: usize) -> usize {
    (0..e).fold(1 % m, |acc, _| acc * b % m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_groups_are_groups(spec in small_spec()) {
        let g = GroupTable::build(&spec).unwrap();
        prop_assert!(common::check_group_axioms(&g).is_ok());
    }

    #[test]
    fn table_text_round_trips(spec in small_spec()) {
        let g = GroupTable::build(&spec).unwrap();
        let back = GroupTable::from_table_text(&g.to_table_text()).unwrap();
        prop_assert_eq!(back.order(), g.order());
        for x in 0..g.order() {
            prop_assert_eq!(back.row(x), g.row(x));
        }
    }

    #[test]
    fn one_changed_entry_is_caught(spec in small_spec(), seed in any::<u64>()) {
        let g = GroupTable::build(&spec).unwrap();
        let n = g.order();
        prop_assume!(n > 1);
        let mut raw: Vec<Vec<i64>> = (0..n).map(|x| g.row(x).iter().map(|&y| y as i64).collect()).collect();
        let (r, c) = ((seed % n as u64) as usize, ((seed / 257) % n as u64) as usize);
        let delta = 1 + (seed / 65_537) as usize % (n - 1);
        raw[r][c] = ((raw[r][c] as usize + delta) % n) as i64;
        prop_assert!(GroupTable::validate(&raw).is_err());
    }
}
