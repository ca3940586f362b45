//! Independent reference checks shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use steiner::{ActionScenario, Design, GroupTable, Orbit};

/// Every group spec the crate can build that the tests exercise.
pub fn built_specs() -> Vec<String> {
    let mut specs: Vec<String> = (1..=60).map(|n| format!("cyclic({n})")).collect();
    specs.extend(
        [
            "cyclic(125)",
            "cyclic(155)",
            "direct(cyclic(5),cyclic(31))",
            "direct(cyclic(2),cyclic(2))",
            "direct(cyclic(3),semidirect(7,3,2))",
            "semidirect(3,2,2)",
            "semidirect(5,4,2)",
            "semidirect(7,3,2)",
            "semidirect(15,2,4)",
            "semidirect(15,2,11)",
            "semidirect(15,2,14)",
            "semidirect(19,3,7)",
            "semidirect(19,3,7,row-major)",
            "semidirect(31,5,2)",
            "heisenberg(3)",
            "heisenberg(5)",
            "direct(cyclic(5),heisenberg(3))",
            "direct(cyclic(5),semidirect(9,3,4))",
            "sl25",
        ]
        .map(String::from),
    );
    specs
}

/// Identity at 0, Latin rows and columns, associativity over all triples.
pub fn check_group_axioms(g: &GroupTable) -> Result<(), String> {
    let n = g.order();
    for x in 0..n {
        if g.mul(0, x) != x || g.mul(x, 0) != x {
            return Err(format!("0 is not an identity at {x}"));
        }
        let row: BTreeSet<usize> = (0..n).map(|y| g.mul(x, y)).collect();
        let col: BTreeSet<usize> = (0..n).map(|y| g.mul(y, x)).collect();
        if row.len() != n || col.len() != n {
            return Err(format!("row or column {x} is not a permutation"));
        }
        if g.mul(x, g.inverse(x)) != 0 || g.mul(g.inverse(x), x) != 0 {
            return Err(format!("bad inverse of {x}"));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = g.mul(x, y);
            for z in 0..n {
                if g.mul(xy, z) != g.mul(x, g.mul(y, z)) {
                    return Err(format!("({x}*{y})*{z} != {x}*({y}*{z})"));
                }
            }
        }
    }
    Ok(())
}

/// Identity acts trivially, the action is compatible with the product,
/// every element permutes the points and each orbit is transitive.
pub fn check_action_axioms(s: &ActionScenario) -> Result<(), String> {
    let (v, n) = (s.v(), s.order());
    let g = s.group();
    for p in 0..v {
        if s.image(0, p) != p {
            return Err(format!("identity moves {p}"));
        }
    }
    for a in 0..n {
        let perm = s.permutation(a);
        let distinct: BTreeSet<u16> = perm.iter().copied().collect();
        if perm.len() != v || distinct.len() != v {
            return Err(format!("element {a} does not permute the points"));
        }
        for b in 0..n {
            let ab = g.mul(a, b);
            for p in 0..v {
                if s.image(a, s.image(b, p)) != s.image(ab, p) {
                    return Err(format!("{a}({b}({p})) != ({a}{b})({p})"));
                }
            }
        }
    }
    for (o, orbit) in s.space().orbits().iter().enumerate() {
        let start = s.space().offset(o);
        let reach: BTreeSet<usize> = (0..n).map(|a| s.image(a, start)).collect();
        let want: BTreeSet<usize> = (start..start + orbit.size()).collect();
        if reach != want {
            return Err(format!("orbit {o} is not a single orbit"));
        }
        if matches!(orbit, Orbit::Fixed) && reach.len() != 1 {
            return Err("fixed point moves".into());
        }
    }
    Ok(())
}

/// Pair counting without any of the crate's indexing.
pub fn naive_is_steiner(d: &Design) -> bool {
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for blk in d.blocks() {
        if blk.len() != d.k() {
            return false;
        }
        for (i, &p) in blk.iter().enumerate() {
            for &q in &blk[i + 1..] {
                *seen.entry((p.min(q), p.max(q))).or_default() += 1;
            }
        }
    }
    seen.len() == d.v() * (d.v() - 1) / 2 && seen.values().all(|&c| c == 1)
}

/// Direct transcription of the line-configuration census.
pub fn naive_fingerprint(d: &Design) -> BTreeMap<usize, u64> {
    let v = d.v();
    let blocks: Vec<BTreeSet<usize>> = d.blocks().iter().map(|b| b.iter().copied().collect()).collect();
    let line = |p: usize, q: usize| blocks.iter().position(|b| b.contains(&p) && b.contains(&q)).unwrap();
    let mut line_of = vec![vec![usize::MAX; v]; v];
    for p in 0..v {
        for q in 0..v {
            if p != q {
                line_of[p][q] = line(p, q);
            }
        }
    }
    let mut hist = BTreeMap::new();
    for l in &blocks {
        for x in (0..v).filter(|x| !l.contains(x)) {
            for &y in l {
                for &z in l {
                    for &w in l {
                        if y == z || z == w || y == w {
                            continue;
                        }
                        let m = &blocks[line_of[x][y]];
                        let t = &blocks[line_of[x][w]];
                        let key = m
                            .iter()
                            .filter(|&&u| u != x && u != y)
                            .filter(|&&u| blocks[line_of[u][z]].is_disjoint(t))
                            .count();
                        *hist.entry(key).or_insert(0u64) += 1;
                    }
                }
            }
        }
    }
    hist
}

pub fn random_permutation(v: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..v).collect();
    perm.shuffle(rng);
    perm
}
