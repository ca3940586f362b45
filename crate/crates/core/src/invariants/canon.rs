//! Canonical labeling of designs by individualization and refinement.
//!
//! The design is viewed as its point/block incidence graph. Points and
//! blocks start in separate cells; refinement splits cells by neighbour
//! counts until the partition is equitable. The search individualizes a
//! point of the first largest non-singleton point cell and recurses until
//! all points are singletons. Each leaf is keyed by its refinement trace
//! followed by the relabeled block list; the least key is canonical.
//! Leaves with equal keys give automorphisms, which prune sibling subtrees
//! and yield the group order.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::design::{verify_steiner, Design};
use crate::error::{Error, Result};

/// The canonical form of a design and the labeling that produces it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalCertificate {
    pub design: Design,
    /// `labeling[p]` is the canonical label of input point `p`.
    pub labeling: Vec<usize>,
}

/// Answer of [`are_isomorphic`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsoOutcome {
    /// Point map `p -> map[p]` carrying the first design onto the second.
    Isomorphic(Vec<usize>),
    NonIsomorphic(String),
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic(_))
    }
}

/// Search statistics, mostly for diagnostics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonStats {
    pub nodes: u64,
    pub leaves: u64,
    pub generators: usize,
}

pub fn canonical_certificate(design: &Design) -> Result<CanonicalCertificate> {
    Ok(Canonizer::run(checked(design)?).certificate(design))
}

/// Exact order of the automorphism group of the point set.
pub fn automorphism_count(design: &Design) -> Result<u128> {
    Ok(Canonizer::run(checked(design)?).group_order())
}

/// Certificate, group order and statistics from one search.
pub fn canonical_form_with_group(design: &Design) -> Result<(CanonicalCertificate, u128, CanonStats)> {
    let c = Canonizer::run(checked(design)?);
    let stats = CanonStats { nodes: c.nodes, leaves: c.leaves, generators: c.generators.len() };
    Ok((c.certificate(design), c.group_order(), stats))
}

pub fn are_isomorphic(d1: &Design, d2: &Design) -> Result<IsoOutcome> {
    if (d1.v(), d1.k(), d1.b()) != (d2.v(), d2.k(), d2.b()) {
        return Ok(IsoOutcome::NonIsomorphic(format!(
            "parameter mismatch: (v, k, b) = ({}, {}, {}) vs ({}, {}, {})",
            d1.v(),
            d1.k(),
            d1.b(),
            d2.v(),
            d2.k(),
            d2.b()
        )));
    }
    let c1 = canonical_certificate(d1)?;
    let c2 = canonical_certificate(d2)?;
    Ok(isomorphism_from_certificates(&c1, &c2))
}

/// Composes two certificates into a point map, if the canonical forms agree.
pub fn isomorphism_from_certificates(c1: &CanonicalCertificate, c2: &CanonicalCertificate) -> IsoOutcome {
    if c1.design.v() != c2.design.v() || c1.design.k() != c2.design.k() {
        return IsoOutcome::NonIsomorphic("parameter mismatch".into());
    }
    if c1.design != c2.design {
        return IsoOutcome::NonIsomorphic("canonical forms differ".into());
    }
    let mut inv2 = vec![0; c2.labeling.len()];
    for (p, &l) in c2.labeling.iter().enumerate() {
        inv2[l] = p;
    }
    IsoOutcome::Isomorphic(c1.labeling.iter().map(|&l| inv2[l]).collect())
}

fn checked(design: &Design) -> Result<&Design> {
    if verify_steiner(design).pass {
        Ok(design)
    } else {
        Err(Error::Unverified)
    }
}

/// Ordered partition of the incidence graph's vertices.
///
/// Points are vertices `0..v`, blocks `v..v+b`. Cells are contiguous runs
/// of `lab`, identified by their start position.
#[derive(Clone)]
struct Partition {
    lab: Vec<u32>,
    pos: Vec<u32>,
    cell: Vec<u32>,
    end: Vec<u32>,
    point_cells: usize,
}

struct Leaf {
    trace: Vec<u64>,
    form: Vec<Vec<u32>>,
    lab: Vec<u32>,
    path: Vec<u32>,
}

enum Flow {
    Continue,
    /// Unwind to the node at this depth and move to its next child.
    Jump(usize),
}

struct Canonizer<'a> {
    design: &'a Design,
    v: usize,
    adj: Vec<Vec<u32>>,
    counts: Vec<u32>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<u32>>,
    nodes: u64,
    leaves: u64,
}

/// Running comparison of a node's trace against the first and best leaves.
#[derive(Clone, Copy)]
struct TraceState {
    eq_first: bool,
    vs_best: Ordering,
}

impl<'a> Canonizer<'a> {
    fn run(design: &'a Design) -> Canonizer<'a> {
        let v = design.v();
        let b = design.b();
        let n = v + b;
        let mut adj = vec![Vec::new(); n];
        for (i, blk) in design.blocks().iter().enumerate() {
            for &p in blk {
                adj[p].push((v + i) as u32);
                adj[v + i].push(p as u32);
            }
        }
        let mut c = Canonizer {
            design,
            v,
            adj,
            counts: vec![0; n],
            first: None,
            best: None,
            generators: Vec::new(),
            nodes: 0,
            leaves: 0,
        };
        let mut part = Partition {
            lab: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
            cell: (0..n).map(|i| if i < v { 0 } else { v as u32 }).collect(),
            end: vec![0; n],
            point_cells: 1,
        };
        part.end[0] = v as u32;
        part.end[v] = n as u32;
        let mut trace = Vec::new();
        let state = TraceState { eq_first: true, vs_best: Ordering::Equal };
        let complete = c.refine(&mut part, vec![0, v as u32], &mut trace, state);
        debug_assert!(complete);
        c.visit(part, Vec::new(), trace);
        c
    }

    fn certificate(&self, design: &Design) -> CanonicalCertificate {
        let best = self.best.as_ref().expect("search visits at least one leaf");
        let mut labeling = vec![0; self.v];
        for (i, &p) in best.lab[..self.v].iter().enumerate() {
            labeling[p as usize] = i;
        }
        let blocks = best.form.iter().map(|b| b.iter().map(|&p| p as usize).collect()).collect();
        CanonicalCertificate {
            design: Design::new(design.v(), design.k(), blocks).expect("relabeling preserves validity"),
            labeling,
        }
    }

    /// Product over the first path of the orbit length of each chosen point
    /// under the automorphisms fixing the earlier choices.
    fn group_order(&self) -> u128 {
        let path = &self.first.as_ref().expect("search visits at least one leaf").path;
        let mut order: u128 = 1;
        for i in 0..path.len() {
            let orbits = self.orbits_fixing(&path[..i]);
            let root = find(&orbits, path[i] as usize);
            let size = (0..self.v).filter(|&p| find(&orbits, p) == root).count();
            order *= size as u128;
        }
        order
    }

    fn orbits_fixing(&self, fixed: &[u32]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.v).collect();
        for g in &self.generators {
            if fixed.iter().all(|&p| g[p as usize] == p) {
                for p in 0..self.v {
                    union(&mut parent, p, g[p] as usize);
                }
            }
        }
        parent
    }

    fn initial_state(&self, trace: &[u64]) -> TraceState {
        let eq_first = self.first.as_ref().is_none_or(|f| f.trace.starts_with(trace));
        let vs_best = match &self.best {
            None => Ordering::Equal,
            Some(b) => {
                let m = trace.len().min(b.trace.len());
                match trace[..m].cmp(&b.trace[..m]) {
                    Ordering::Equal if trace.len() > b.trace.len() => Ordering::Greater,
                    o => o,
                }
            }
        };
        TraceState { eq_first, vs_best }
    }

    fn visit(&mut self, part: Partition, path: Vec<u32>, trace: Vec<u64>) -> Flow {
        self.nodes += 1;
        if part.point_cells == self.v {
            return self.leaf(part, path, trace);
        }
        // first largest non-singleton point cell
        let mut target = (0, 0);
        let mut s = 0;
        while s < self.v {
            let e = part.end[s] as usize;
            if e - s > target.1 - target.0 {
                target = (s, e);
            }
            s = e;
        }
        let mut children: Vec<u32> = part.lab[target.0..target.1].to_vec();
        children.sort_unstable();
        let depth = path.len();
        let mut explored: Vec<u32> = Vec::new();
        let mut orbits: Option<(usize, Vec<usize>)> = None;
        for x in children {
            if !explored.is_empty() && !self.generators.is_empty() {
                let stale = orbits.as_ref().is_none_or(|(n, _)| *n != self.generators.len());
                if stale {
                    orbits = Some((self.generators.len(), self.orbits_fixing(&path)));
                }
                let o = &orbits.as_ref().unwrap().1;
                let rx = find(o, x as usize);
                if explored.iter().any(|&y| find(o, y as usize) == rx) {
                    continue;
                }
            }
            explored.push(x);
            let mut child_trace = trace.clone();
            child_trace.push(((target.0 as u64) << 32) | (target.1 - target.0) as u64);
            let state = self.initial_state(&child_trace);
            if self.first.is_some() && !state.eq_first && state.vs_best == Ordering::Greater {
                continue;
            }
            let mut child = part.clone();
            let split = child.individualize(x as usize, target.0);
            if !self.refine(&mut child, vec![split as u32], &mut child_trace, state) {
                continue;
            }
            let mut child_path = path.clone();
            child_path.push(x);
            match self.visit(child, child_path, child_trace) {
                Flow::Continue => {}
                Flow::Jump(level) if level == depth => {}
                jump => return jump,
            }
        }
        Flow::Continue
    }

    fn leaf(&mut self, part: Partition, path: Vec<u32>, trace: Vec<u64>) -> Flow {
        self.leaves += 1;
        let v = self.v;
        let mut form: Vec<Vec<u32>> = self
            .design
            .blocks()
            .iter()
            .map(|b| {
                let mut nb: Vec<u32> = b.iter().map(|&p| part.pos[p]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        form.sort_unstable();
        let leaf = Leaf { trace, form, lab: part.lab[..v].to_vec(), path };
        let Some(first) = &self.first else {
            self.first = Some(Leaf { trace: leaf.trace.clone(), form: leaf.form.clone(), lab: leaf.lab.clone(), path: leaf.path.clone() });
            self.best = Some(leaf);
            return Flow::Continue;
        };
        if first.trace == leaf.trace && first.form == leaf.form {
            let level = divergence(&first.path, &leaf.path);
            let g = automorphism(&first.lab, &leaf.lab, v);
            self.generators.push(g);
            return Flow::Jump(level);
        }
        let best = self.best.as_ref().unwrap();
        match (&leaf.trace, &leaf.form).cmp(&(&best.trace, &best.form)) {
            Ordering::Less => self.best = Some(leaf),
            Ordering::Equal => {
                let level = divergence(&best.path, &leaf.path);
                let g = automorphism(&best.lab, &leaf.lab, v);
                self.generators.push(g);
                return Flow::Jump(level);
            }
            Ordering::Greater => {}
        }
        Flow::Continue
    }

    /// Refines to an equitable partition, appending split events to `trace`.
    ///
    /// Returns `false` when the node was abandoned because its trace can
    /// match neither the first leaf nor improve on the best one.
    fn refine(&mut self, part: &mut Partition, splitters: Vec<u32>, trace: &mut Vec<u64>, mut state: TraceState) -> bool {
        let n = part.lab.len();
        let mut in_queue = vec![false; n];
        let mut queue = std::collections::VecDeque::new();
        for s in splitters {
            in_queue[s as usize] = true;
            queue.push_back(s as usize);
        }
        let mut touched: Vec<u32> = Vec::new();
        let mut cells: Vec<u32> = Vec::new();
        let pruning = self.first.is_some();
        let push = |trace: &mut Vec<u64>, event: u64, state: &mut TraceState, this: &Self| -> bool {
            let i = trace.len();
            trace.push(event);
            if !pruning {
                return true;
            }
            if state.eq_first && this.first.as_ref().unwrap().trace.get(i) != Some(&event) {
                state.eq_first = false;
            }
            if state.vs_best == Ordering::Equal {
                state.vs_best = match this.best.as_ref().unwrap().trace.get(i) {
                    None => Ordering::Greater,
                    Some(b) => event.cmp(b),
                };
            }
            state.eq_first || state.vs_best != Ordering::Greater
        };
        while let Some(w) = queue.pop_front() {
            in_queue[w] = false;
            let we = part.end[w] as usize;
            for i in w..we {
                let u = part.lab[i] as usize;
                for &nb in &self.adj[u] {
                    if self.counts[nb as usize] == 0 {
                        touched.push(nb);
                    }
                    self.counts[nb as usize] += 1;
                }
            }
            cells.clear();
            cells.extend(touched.iter().map(|&t| part.cell[t as usize]));
            cells.sort_unstable();
            cells.dedup();
            for &c in &cells {
                let (c, e) = (c as usize, part.end[c as usize] as usize);
                if e - c == 1 {
                    continue;
                }
                let first_count = self.counts[part.lab[c] as usize];
                if part.lab[c..e].iter().all(|&x| self.counts[x as usize] == first_count) {
                    continue;
                }
                let counts = &self.counts;
                part.lab[c..e].sort_unstable_by_key(|&x| (counts[x as usize], x));
                if !push(trace, ((w as u64) << 40) | ((c as u64) << 20) | (e - c) as u64, &mut state, self) {
                    self.reset(&mut touched);
                    return false;
                }
                let was_queued = in_queue[c];
                let mut frags: Vec<(usize, usize)> = Vec::new();
                let mut s = c;
                while s < e {
                    let cnt = self.counts[part.lab[s] as usize];
                    let mut t = s + 1;
                    while t < e && self.counts[part.lab[t] as usize] == cnt {
                        t += 1;
                    }
                    frags.push((s, t));
                    if !push(trace, ((cnt as u64) << 32) | (t - s) as u64, &mut state, self) {
                        self.reset(&mut touched);
                        return false;
                    }
                    s = t;
                }
                for &(s, t) in &frags {
                    part.end[s] = t as u32;
                    for i in s..t {
                        let x = part.lab[i] as usize;
                        part.pos[x] = i as u32;
                        part.cell[x] = s as u32;
                    }
                }
                if c < self.v {
                    part.point_cells += frags.len() - 1;
                }
                let largest = frags.iter().enumerate().max_by_key(|(i, f)| (f.1 - f.0, std::cmp::Reverse(*i))).unwrap().0;
                for (i, &(s, _)) in frags.iter().enumerate() {
                    if !in_queue[s] && (was_queued || i != largest) {
                        in_queue[s] = true;
                        queue.push_back(s);
                    }
                }
            }
            self.reset(&mut touched);
        }
        push(trace, u64::MAX - part.point_cells as u64, &mut state, self)
    }

    fn reset(&mut self, touched: &mut Vec<u32>) {
        for &t in touched.iter() {
            self.counts[t as usize] = 0;
        }
        touched.clear();
    }
}

impl Partition {
    /// Moves `x` to the front of its cell and splits it off. Returns the
    /// position of the new singleton.
    fn individualize(&mut self, x: usize, start: usize) -> usize {
        let end = self.end[start];
        let px = self.pos[x] as usize;
        let y = self.lab[start] as usize;
        self.lab.swap(start, px);
        self.pos[x] = start as u32;
        self.pos[y] = px as u32;
        self.end[start] = start as u32 + 1;
        self.end[start + 1] = end;
        for i in start + 1..end as usize {
            self.cell[self.lab[i] as usize] = start as u32 + 1;
        }
        self.point_cells += 1;
        start
    }
}

fn divergence(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Point map sending the labeling `from` onto `to`.
fn automorphism(from: &[u32], to: &[u32], v: usize) -> Vec<u32> {
    let mut g = vec![0; v];
    for i in 0..v {
        g[from[i] as usize] = to[i];
    }
    g
}

fn find(parent: &[usize], mut x: usize) -> usize {
    while parent[x] != x {
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> Design {
        let blocks = (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect();
        Design::new(7, 3, blocks).unwrap()
    }

    /// AG(2,3): points (x, y) in Z3², lines as affine lines.
    fn affine_plane() -> Design {
        let pt = |x: usize, y: usize| 3 * (x % 3) + y % 3;
        let mut blocks = Vec::new();
        for c in 0..3 {
            blocks.push((0..3).map(|y| pt(c, y)).collect());
            for m in 0..3 {
                blocks.push((0..3).map(|x| pt(x, m * x + c)).collect());
            }
        }
        Design::new(9, 3, blocks).unwrap()
    }

    #[test]
    fn classical_group_orders() {
        assert_eq!(automorphism_count(&fano()).unwrap(), 168);
        assert_eq!(automorphism_count(&affine_plane()).unwrap(), 432);
    }

    #[test]
    fn relabeling_invariance() {
        let d = affine_plane();
        let c = canonical_certificate(&d).unwrap();
        assert_eq!(d.relabel(&c.labeling), c.design);
        let perm = vec![4, 0, 8, 2, 6, 1, 3, 7, 5];
        let e = d.relabel(&perm);
        let ce = canonical_certificate(&e).unwrap();
        assert_eq!(ce.design, c.design);
        let IsoOutcome::Isomorphic(map) = are_isomorphic(&d, &e).unwrap() else { panic!() };
        assert_eq!(d.relabel(&map), e);
    }

    #[test]
    fn deterministic() {
        let d = fano();
        assert_eq!(canonical_certificate(&d).unwrap(), canonical_certificate(&d).unwrap());
    }

    #[test]
    fn parameter_mismatch() {
        let out = are_isomorphic(&fano(), &affine_plane()).unwrap();
        assert!(matches!(out, IsoOutcome::NonIsomorphic(r) if r.contains("parameter mismatch")));
    }

    #[test]
    fn rejects_unverified() {
        assert!(canonical_certificate(&fano().without_block(2)).is_err());
    }
}
