//! Brute-force reference enumeration for small instances.
//!
//! Works on raw point pairs rather than pair classes: every k-subset that
//! is least in its orbit is expanded, orbits covering some pair twice are
//! dropped, and all pair-disjoint selections of the rest are tried.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::action::ActionScenario;
use crate::design::{require_admissible, verify_steiner, BaseBlockSystem};
use crate::error::{Error, Result};

/// Most k-subsets the oracle will look at.
pub const ORACLE_CAP: u128 = 100_000;

fn binomial(n: usize, k: usize) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k.min(n) as u128 {
        r = r * (n as u128 - i) / (i + 1);
    }
    if k > n {
        0
    } else {
        r
    }
}

struct Orbit {
    rep: Vec<usize>,
    pairs: Vec<u64>,
}

pub fn brute_force_oracle(scenario: &Arc<ActionScenario>, k: usize) -> Result<Vec<BaseBlockSystem>> {
    let v = scenario.v();
    require_admissible(v, k)?;
    let candidates = binomial(v, k);
    if candidates > ORACLE_CAP {
        return Err(Error::OracleCap { candidates, cap: ORACLE_CAP });
    }
    let n_pairs = v * (v - 1) / 2;
    let words = n_pairs.div_ceil(64);
    let pair = |p: usize, q: usize| {
        let (a, b) = if p < q { (p, q) } else { (q, p) };
        a * (2 * v - a - 1) / 2 + (b - a - 1)
    };

    let mut orbits = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let orbit = scenario.block_orbit(&subset)?;
        if orbit[0] == subset {
            let mut bits = vec![0u64; words];
            let mut ok = true;
            'scan: for b in &orbit {
                for (i, &p) in b.iter().enumerate() {
                    for &q in &b[i + 1..] {
                        let e = pair(p, q);
                        if bits[e / 64] >> (e % 64) & 1 == 1 {
                            ok = false;
                            break 'scan;
                        }
                        bits[e / 64] |= 1 << (e % 64);
                    }
                }
            }
            if ok {
                orbits.push(Orbit { rep: subset.clone(), pairs: bits });
            }
        }
        // next k-subset in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| subset[i] < v - k + i) else { break };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }

    let mut found = BTreeSet::new();
    let mut covered = vec![0u64; words];
    let mut chosen = Vec::new();
    select(&orbits, 0, &mut covered, n_pairs, &mut chosen, &mut found);

    let mut out = Vec::new();
    for blocks in found {
        let system = BaseBlockSystem::new(scenario.clone(), blocks)?;
        if verify_steiner(&system.expand()?).pass {
            out.push(system);
        }
    }
    Ok(out)
}

fn select(
    orbits: &[Orbit],
    from: usize,
    covered: &mut Vec<u64>,
    n_pairs: usize,
    chosen: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<Vec<usize>>>,
) {
    let count: usize = covered.iter().map(|w| w.count_ones() as usize).sum();
    if count == n_pairs {
        let mut blocks: Vec<Vec<usize>> = chosen.iter().map(|&i| orbits[i].rep.clone()).collect();
        blocks.sort();
        found.insert(blocks);
        return;
    }
    for i in from..orbits.len() {
        let o = &orbits[i];
        if o.pairs.iter().zip(covered.iter()).any(|(a, b)| a & b != 0) {
            continue;
        }
        for (c, p) in covered.iter_mut().zip(&o.pairs) {
            *c |= p;
        }
        chosen.push(i);
        select(orbits, i + 1, covered, n_pairs, chosen, found);
        chosen.pop();
        for (c, p) in covered.iter_mut().zip(&o.pairs) {
            *c &= !p;
        }
    }
}
