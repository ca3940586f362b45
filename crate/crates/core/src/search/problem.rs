//! Exact-cover formulation over pair classes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::action::{ActionScenario, PairClasses};
use crate::error::{Error, Result};

use super::MAX_CLASSES;

/// Largest block size the search supports.
pub const MAX_K: usize = 16;

/// Fixed-width bitset over pair classes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassSet([u64; MAX_CLASSES / 64]);

impl ClassSet {
    #[inline]
    pub fn contains(&self, c: usize) -> bool {
        self.0[c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, c: usize) {
        self.0[c / 64] |= 1 << (c % 64);
    }

    #[inline]
    pub fn intersects(&self, other: &ClassSet) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn union(&self, other: &ClassSet) -> ClassSet {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    /// Lowest class in `0..n` not in the set.
    #[inline]
    pub fn first_missing(&self, n: usize) -> Option<usize> {
        for (i, &w) in self.0.iter().enumerate() {
            if w != u64::MAX {
                let c = i * 64 + (!w).trailing_zeros() as usize;
                return (c < n).then_some(c);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_CLASSES).filter(|&c| self.contains(c))
    }
}

/// A base block and the pair classes its orbit covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pts: [u16; MAX_K],
    len: u8,
    pub classes: ClassSet,
}

impl Candidate {
    pub fn new(block: &[usize], classes: ClassSet) -> Candidate {
        let mut pts = [0u16; MAX_K];
        for (d, &p) in pts.iter_mut().zip(block) {
            *d = p as u16;
        }
        let mut c = Candidate { pts, len: block.len() as u8, classes };
        c.pts[..block.len()].sort_unstable();
        c
    }

    pub fn points(&self) -> &[u16] {
        &self.pts[..self.len as usize]
    }

    pub fn block(&self) -> Vec<usize> {
        self.points().iter().map(|&p| p as usize).collect()
    }
}

/// Scenario data shared by every search node.
pub struct Problem {
    pub scenario: Arc<ActionScenario>,
    pub k: usize,
    pub classes: PairClasses,
    pub n_classes: usize,
    class_of: Vec<u8>,
    regular: Vec<bool>,
    /// Blocks with non-trivial stabilizer whose orbit covers each class at
    /// most once, one per block orbit.
    pub short: Vec<Candidate>,
    pub short_by_class: Vec<Vec<u32>>,
}

impl Problem {
    pub fn new(scenario: Arc<ActionScenario>, k: usize) -> Result<Problem> {
        if !(2..=MAX_K).contains(&k) {
            return Err(Error::InvalidDesign(format!("search supports 2 <= k <= {MAX_K}, got {k}")));
        }
        if scenario.v() > u16::MAX as usize {
            return Err(Error::Scenario("too many points for the search".into()));
        }
        let classes = scenario.pair_classes();
        let n_classes = classes.count();
        if n_classes > MAX_CLASSES {
            return Err(Error::TooManyClasses(n_classes));
        }
        let v = scenario.v();
        let mut class_of = vec![u8::MAX; v * v];
        for p in 0..v {
            for q in 0..v {
                if p != q {
                    class_of[p * v + q] = classes.class_of(p, q) as u8;
                }
            }
        }
        let order = scenario.order();
        let regular = (0..n_classes).map(|c| classes.size(c) == order).collect();
        let mut problem = Problem {
            scenario,
            k,
            classes,
            n_classes,
            class_of,
            regular,
            short: Vec::new(),
            short_by_class: vec![Vec::new(); n_classes],
        };
        problem.short = problem.short_candidates();
        for (i, s) in problem.short.iter().enumerate() {
            for c in s.classes.iter() {
                problem.short_by_class[c].push(i as u32);
            }
        }
        Ok(problem)
    }

    #[inline]
    pub fn class(&self, p: usize, q: usize) -> usize {
        self.class_of[p * self.scenario.v() + q] as usize
    }

    #[inline]
    pub fn is_regular(&self, c: usize) -> bool {
        self.regular[c]
    }

    /// Classes covered by the orbit of `block`, if each is covered exactly once.
    pub fn coverage(&self, block: &[usize]) -> Option<ClassSet> {
        let mut n_c: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, &p) in block.iter().enumerate() {
            for &q in &block[i + 1..] {
                *n_c.entry(self.class(p, q)).or_default() += 1;
            }
        }
        let stab = self.scenario.stabilizer(block).len();
        let order = self.scenario.order();
        let mut set = ClassSet::default();
        for (c, n) in n_c {
            if n * order != stab * self.classes.size(c) {
                return None;
            }
            set.insert(c);
        }
        Some(set)
    }

    /// Every block orbit with non-trivial stabilizer and exact coverage.
    ///
    /// Such a block is fixed by a subgroup of prime order, so it is a union
    /// of that subgroup's point orbits. One subgroup per conjugacy class
    /// suffices, since conjugating the subgroup moves the block within its
    /// orbit.
    fn short_candidates(&self) -> Vec<Candidate> {
        let s = &self.scenario;
        let g = s.group();
        let mut reps: BTreeMap<Vec<usize>, ClassSet> = BTreeMap::new();
        for sub in prime_subgroup_classes(g) {
            let orbits = point_orbits(s, &sub);
            let mut chosen = Vec::new();
            unions(&orbits, 0, self.k, &mut chosen, &mut |block| {
                let mut block = block.to_vec();
                block.sort_unstable();
                if let Some(cover) = self.coverage(&block) {
                    reps.entry(s.orbit_representative(&block)).or_insert(cover);
                }
            });
        }
        reps.into_iter().map(|(b, c)| Candidate::new(&b, c)).collect()
    }

    /// Full-orbit blocks through the representative pair of class `c` whose
    /// pairs lie in distinct regular classes outside `covered`.
    pub fn full_children(&self, c: usize, covered: &ClassSet, out: &mut Vec<Candidate>) {
        if !self.is_regular(c) {
            return;
        }
        let (p, q) = self.classes.representative(c);
        let mut used = *covered;
        used.insert(c);
        let mut block = [0usize; MAX_K];
        block[0] = p;
        block[1] = q;
        self.extend_full(&mut block, 2, 0, used, out);
    }

    fn extend_full(&self, block: &mut [usize; MAX_K], len: usize, start: usize, used: ClassSet, out: &mut Vec<Candidate>) {
        if len == self.k {
            let mut pts = *block;
            pts[..len].sort_unstable();
            out.push(Candidate::new(&pts[..len], used));
            return;
        }
        let v = self.scenario.v();
        // leave room for the remaining points in ascending order
        let last = v - (self.k - len - 1);
        'next: for x in start..last {
            if block[..len].contains(&x) {
                continue;
            }
            let mut u = used;
            for &y in &block[..len] {
                let c = self.class(x, y);
                if !self.regular[c] || u.contains(c) {
                    continue 'next;
                }
                u.insert(c);
            }
            block[len] = x;
            self.extend_full(block, len + 1, x + 1, u, out);
        }
    }

    /// Children of a node: short candidates then full blocks covering the
    /// lowest uncovered class. The covered set of each child is only the
    /// block's own classes.
    pub fn children(&self, covered: &ClassSet, out: &mut Vec<Candidate>) -> Option<usize> {
        out.clear();
        let c = covered.first_missing(self.n_classes)?;
        for &i in &self.short_by_class[c] {
            let s = &self.short[i as usize];
            if !s.classes.intersects(covered) {
                out.push(*s);
            }
        }
        let start = out.len();
        self.full_children(c, covered, out);
        for cand in &mut out[start..] {
            // drop the inherited covered set, keep the block's own classes
            let mut own = ClassSet::default();
            for (i, &p) in cand.points().iter().enumerate() {
                for &q in &cand.points()[i + 1..] {
                    own.insert(self.class(p as usize, q as usize));
                }
            }
            cand.classes = own;
        }
        Some(c)
    }
}

/// One subgroup of prime order from each conjugacy class, as element lists.
fn prime_subgroup_classes(g: &crate::group::GroupTable) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for x in 1..n {
        let ord = g.element_order(x);
        if !is_prime(ord) {
            continue;
        }
        let mut sub = vec![0];
        let mut y = x;
        while y != 0 {
            sub.push(y);
            y = g.mul(y, x);
        }
        sub.sort_unstable();
        if seen.contains(&sub) {
            continue;
        }
        for h in 0..n {
            let hi = g.inverse(h);
            let mut conj: Vec<usize> = sub.iter().map(|&s| g.mul(g.mul(h, s), hi)).collect();
            conj.sort_unstable();
            seen.insert(conj);
        }
        out.push(sub);
    }
    out
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn point_orbits(s: &ActionScenario, sub: &[usize]) -> Vec<Vec<usize>> {
    let v = s.v();
    let mut seen = vec![false; v];
    let mut orbits = Vec::new();
    for p in 0..v {
        if seen[p] {
            continue;
        }
        let mut orbit: Vec<usize> = sub.iter().map(|&h| s.image(h, p)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &q in &orbit {
            seen[q] = true;
        }
        orbits.push(orbit);
    }
    orbits
}

fn unions(orbits: &[Vec<usize>], from: usize, room: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if room == 0 {
        f(chosen);
        return;
    }
    for i in from..orbits.len() {
        let o = &orbits[i];
        if o.len() <= room {
            let len = chosen.len();
            chosen.extend_from_slice(o);
            unions(orbits, i + 1, room - o.len(), chosen, f);
            chosen.truncate(len);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::build_scenario;
    use crate::action::ScenarioKind;
    use crate::group::{GroupSpec, GroupTable};

    fn problem(kind: ScenarioKind, spec: GroupSpec, k: usize) -> Problem {
        let g = Arc::new(GroupTable::build(&spec).unwrap());
        Problem::new(Arc::new(build_scenario(kind, g).unwrap()), k).unwrap()
    }

    #[test]
    fn class_set_ops() {
        let mut a = ClassSet::default();
        assert_eq!(a.first_missing(10), Some(0));
        for c in 0..70 {
            a.insert(c);
        }
        assert_eq!(a.first_missing(100), Some(70));
        assert_eq!(a.first_missing(70), None);
        assert_eq!(a.len(), 70);
        let mut b = ClassSet::default();
        b.insert(200);
        assert!(!a.intersects(&b));
        assert_eq!(a.union(&b).len(), 71);
    }

    #[test]
    fn mills_short_blocks_are_found() {
        let p = problem(ScenarioKind::CyclicTwoOrbit, GroupSpec::Cyclic(48), 6);
        let short: Vec<Vec<usize>> = p.short.iter().map(Candidate::block).collect();
        assert!(short.contains(&vec![0, 8, 16, 24, 32, 40]));
        assert!(short.contains(&vec![48, 56, 64, 72, 80, 88]));
        for s in &p.short {
            assert!(p.scenario.stabilizer(&s.block()).len() > 1);
        }
    }

    #[test]
    fn coset_plus_fixed_point_is_short() {
        let p = problem(ScenarioKind::CyclicTwoOrbitPlusFixed, GroupSpec::Cyclic(55), 6);
        let short: Vec<Vec<usize>> = p.short.iter().map(Candidate::block).collect();
        assert!(short.contains(&vec![0, 11, 22, 33, 44, 110]));
    }

    #[test]
    fn full_children_cover_distinct_regular_classes() {
        let p = problem(ScenarioKind::RegularPlusFixed, GroupSpec::Cyclic(12), 3);
        let mut out = Vec::new();
        let c = p.children(&ClassSet::default(), &mut out).unwrap();
        assert!(!out.is_empty());
        for cand in &out {
            assert!(cand.classes.contains(c));
            assert_eq!(p.coverage(&cand.block()), Some(cand.classes));
        }
    }
}
