//! Exhaustive search for base-block systems.
//!
//! Every block orbit covers some pair classes; a Steiner system is a choice
//! of orbits covering each class exactly once. The search always branches
//! on the lowest uncovered class. Candidates are the precomputed short
//! orbits through that class and the full orbits through its representative
//! pair, so each block orbit is reached from exactly one block.

mod checkpoint;
mod iso;
mod oracle;
mod problem;

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::action::ActionScenario;
use crate::design::{require_admissible, verify_steiner, BaseBlockSystem};
use crate::error::{Error, Result};

pub use checkpoint::{found_path, read_prefixes, Checkpoint};
pub use iso::{isomorphism_classes, IsoClass};
pub use oracle::{brute_force_oracle, ORACLE_CAP};
pub use problem::{Candidate, ClassSet, Problem, MAX_K};

/// Most pair classes a scenario may have.
pub const MAX_CLASSES: usize = 256;

/// Selects root branches `j` with `j % total == index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub index: usize,
    pub total: usize,
}

impl Branch {
    pub const ALL: Branch = Branch { index: 0, total: 1 };

    pub fn selects(&self, j: usize) -> bool {
        j % self.total == self.index
    }
}

impl Default for Branch {
    fn default() -> Self {
        Branch::ALL
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.index, self.total)
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Branch> {
        let bad = || Error::Config(format!("branch must look like i/N with i < N, got `{s}`"));
        let (i, n) = s.split_once('/').ok_or_else(bad)?;
        let index: usize = i.trim().parse().map_err(|_| bad())?;
        let total: usize = n.trim().parse().map_err(|_| bad())?;
        if total == 0 || index >= total {
            return Err(bad());
        }
        Ok(Branch { index, total })
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub scenario: Arc<ActionScenario>,
    pub k: usize,
    /// Base blocks every result must contain.
    pub forced: Vec<Vec<usize>>,
    pub branch: Branch,
    pub checkpoint: Option<PathBuf>,
    pub jobs: usize,
    pub limit: Option<usize>,
    /// Stop after roughly this many search nodes.
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
}

impl SearchConfig {
    pub fn new(scenario: Arc<ActionScenario>, k: usize) -> SearchConfig {
        SearchConfig {
            scenario,
            k,
            forced: Vec::new(),
            branch: Branch::ALL,
            checkpoint: None,
            jobs: 1,
            limit: None,
            node_budget: None,
            time_budget: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Found systems, base blocks as orbit representatives, sorted.
    pub systems: Vec<BaseBlockSystem>,
    /// True when every selected branch was searched to the end.
    pub exhaustive: bool,
    pub nodes: u64,
    pub root_branches: usize,
    pub selected_branches: usize,
    /// Two-level prefixes skipped because the checkpoint marks them done.
    pub resumed_prefixes: usize,
    pub elapsed: Duration,
}

struct Prepared {
    problem: Problem,
    forced: Vec<Candidate>,
    covered: ClassSet,
}

fn prepare(scenario: &Arc<ActionScenario>, k: usize, forced: &[Vec<usize>]) -> Result<Prepared> {
    require_admissible(scenario.v(), k)?;
    let problem = Problem::new(scenario.clone(), k)?;
    let mut covered = ClassSet::default();
    let mut cands = Vec::new();
    let mut reps = BTreeSet::new();
    for (i, block) in forced.iter().enumerate() {
        let mut block = block.clone();
        block.sort_unstable();
        block.dedup();
        if block.len() != k || block.iter().any(|&p| p >= scenario.v()) {
            return Err(Error::InconsistentForced(format!("forced block {i} is not a {k}-subset of the points")));
        }
        let cover = problem
            .coverage(&block)
            .ok_or_else(|| Error::InconsistentForced(format!("forced block {i} covers some pair class twice")))?;
        if cover.intersects(&covered) {
            return Err(Error::InconsistentForced(format!("forced block {i} covers a class already covered")));
        }
        if !reps.insert(scenario.orbit_representative(&block)) {
            return Err(Error::InconsistentForced(format!("forced block {i} repeats an earlier orbit")));
        }
        covered = covered.union(&cover);
        cands.push(Candidate::new(&block, cover));
    }
    Ok(Prepared { problem, forced: cands, covered })
}

/// Shared stop conditions.
struct Control {
    nodes: AtomicU64,
    stop: AtomicBool,
    budget: Option<u64>,
    deadline: Option<Instant>,
    limit: Option<usize>,
    /// Per selected branch: solution count once the branch finished.
    finished: Mutex<Vec<Option<usize>>>,
    /// Branches after this index are no longer needed to reach the limit.
    cutoff: AtomicUsize,
}

impl Control {
    fn halted(&self, branch: usize) -> bool {
        self.stop.load(Ordering::Relaxed) || branch > self.cutoff.load(Ordering::Relaxed)
    }

    fn tick(&self, local: &mut u64) {
        if *local >= 1024 {
            self.flush(local);
        }
    }

    /// Moves a worker's node count into the shared total and checks budgets.
    fn flush(&self, local: &mut u64) {
        let total = self.nodes.fetch_add(*local, Ordering::Relaxed) + *local;
        *local = 0;
        let over_budget = self.budget.is_some_and(|b| total >= b);
        let late = self.deadline.is_some_and(|d| Instant::now() >= d);
        if over_budget || late {
            self.stop.store(true, Ordering::Relaxed);
        }
    }

    fn branch_done(&self, branch: usize, count: usize) {
        let Some(limit) = self.limit else { return };
        let mut f = self.finished.lock().unwrap();
        f[branch] = Some(count);
        let mut sum = 0;
        for (i, c) in f.iter().enumerate() {
            let Some(c) = c else { break };
            sum += c;
            if sum >= limit {
                self.cutoff.fetch_min(i, Ordering::Relaxed);
                break;
            }
        }
    }
}

struct Worker<'a> {
    prep: &'a Prepared,
    control: &'a Control,
    branch: usize,
    local_nodes: u64,
    buffers: Vec<Vec<Candidate>>,
    chosen: Vec<Candidate>,
    found: Vec<Vec<Vec<usize>>>,
    /// Solutions this branch found under earlier prefixes.
    earlier: usize,
    aborted: bool,
}

impl Worker<'_> {
    fn emit(&mut self) {
        let problem = &self.prep.problem;
        let blocks: Vec<Vec<usize>> = self.chosen.iter().map(Candidate::block).collect();
        let system = BaseBlockSystem::new(problem.scenario.clone(), blocks)
            .expect("search blocks lie in the point space")
            .canonical();
        let design = system.expand().expect("search never picks two blocks from one orbit");
        assert!(verify_steiner(&design).pass, "search emitted a non-Steiner system");
        self.found.push(system.base_blocks().to_vec());
    }

    fn dfs(&mut self, covered: ClassSet, depth: usize) {
        self.local_nodes += 1;
        self.control.tick(&mut self.local_nodes);
        if self.control.halted(self.branch) {
            self.aborted = true;
            return;
        }
        if let Some(limit) = self.control.limit {
            if self.earlier + self.found.len() >= limit {
                self.aborted = true;
                return;
            }
        }
        while self.buffers.len() <= depth {
            self.buffers.push(Vec::new());
        }
        let mut children = std::mem::take(&mut self.buffers[depth]);
        if self.prep.problem.children(&covered, &mut children).is_none() {
            self.emit();
            self.buffers[depth] = children;
            return;
        }
        for child in &children {
            debug_assert!(!child.classes.intersects(&covered));
            self.chosen.push(*child);
            self.dfs(covered.union(&child.classes), depth + 1);
            self.chosen.pop();
            if self.aborted {
                break;
            }
        }
        self.buffers[depth] = children;
    }
}

/// Enumerates every base-block system of the scenario within the selected
/// branches.
pub fn enumerate_designs(config: &SearchConfig) -> Result<SearchOutcome> {
    let start = Instant::now();
    if config.branch.total == 0 || config.branch.index >= config.branch.total {
        return Err(Error::Config(format!("bad branch selector {}", config.branch)));
    }
    if config.jobs == 0 {
        return Err(Error::Config("jobs must be positive".into()));
    }
    let prep = prepare(&config.scenario, config.k, &config.forced)?;
    let space = config.scenario.space();
    let checkpoint = config.checkpoint.as_deref().map(|p| Checkpoint::open(p, space)).transpose()?;

    let mut roots = Vec::new();
    let mut found: Vec<Vec<Vec<usize>>> = checkpoint.as_ref().map(|c| c.found().to_vec()).unwrap_or_default();
    let mut nodes = 1;
    let mut selected = Vec::new();
    if prep.problem.children(&prep.covered, &mut roots).is_none() {
        // forced blocks already form a design
        if config.branch.index == 0 {
            let mut w = worker(&prep, None, 0);
            w.chosen = prep.forced.clone();
            w.emit();
            found.extend(w.found);
        }
    } else {
        selected = (0..roots.len()).filter(|&j| config.branch.selects(j)).collect();
    }

    let control = Control {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        budget: config.node_budget,
        deadline: config.time_budget.map(|d| start + d),
        limit: config.limit,
        finished: Mutex::new(vec![None; selected.len()]),
        cutoff: AtomicUsize::new(usize::MAX),
    };
    let resumed = AtomicUsize::new(0);
    let run_root = |si: usize, j: usize| -> Result<(Vec<Vec<Vec<usize>>>, bool)> {
        if control.halted(si) {
            return Ok((Vec::new(), false));
        }
        let root = roots[j];
        let mut w = worker(&prep, Some(&control), si);
        w.chosen = prep.forced.clone();
        w.chosen.push(root);
        let covered = prep.covered.union(&root.classes);
        // resumed prefixes cost no nodes, so every round makes progress
        let mut root_counted = false;
        let mut seconds = Vec::new();
        if prep.problem.children(&covered, &mut seconds).is_none() {
            let prefix = root.points().to_vec();
            if checkpoint.as_ref().is_some_and(|c| c.is_done(&prefix)) {
                resumed.fetch_add(1, Ordering::Relaxed);
            } else {
                w.local_nodes += 1;
                w.emit();
                if let Some(c) = &checkpoint {
                    c.complete(&prefix, &w.found, space)?;
                }
            }
        }
        let mut out = std::mem::take(&mut w.found);
        for second in &seconds {
            let mut prefix = root.points().to_vec();
            prefix.extend_from_slice(second.points());
            if checkpoint.as_ref().is_some_and(|c| c.is_done(&prefix)) {
                resumed.fetch_add(1, Ordering::Relaxed);
                continue;
            }
            control.flush(&mut w.local_nodes);
            if control.halted(si) {
                w.aborted = true;
                break;
            }
            if !root_counted {
                w.local_nodes += 1;
                root_counted = true;
            }
            w.chosen.push(*second);
            w.dfs(covered.union(&second.classes), 2);
            w.chosen.pop();
            let sols = std::mem::take(&mut w.found);
            if w.aborted {
                out.extend(sols);
                break;
            }
            if let Some(c) = &checkpoint {
                c.complete(&prefix, &sols, space)?;
            }
            out.extend(sols);
            w.earlier = out.len();
            if config.limit.is_some_and(|l| out.len() >= l) {
                w.aborted = true;
                break;
            }
        }
        control.flush(&mut w.local_nodes);
        let complete = !w.aborted;
        if complete || config.limit.is_some_and(|l| out.len() >= l) {
            control.branch_done(si, out.len());
        }
        Ok((out, complete))
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let results: Vec<Result<(Vec<Vec<Vec<usize>>>, bool)>> =
        pool.install(|| selected.par_iter().enumerate().map(|(si, &j)| run_root(si, j)).collect());

    let mut exhaustive = true;
    let mut fresh = Vec::new();
    for r in results {
        let (sols, complete) = r?;
        exhaustive &= complete;
        fresh.extend(sols);
    }
    if let Some(limit) = config.limit {
        fresh.truncate(limit.saturating_sub(found.len()));
    }
    found.extend(fresh);
    let unique: BTreeSet<Vec<Vec<usize>>> = found.into_iter().collect();
    let systems = unique
        .into_iter()
        .map(|b| BaseBlockSystem::new(config.scenario.clone(), b))
        .collect::<Result<Vec<_>>>()?;
    nodes += control.nodes.load(Ordering::Relaxed);
    Ok(SearchOutcome {
        systems,
        exhaustive: exhaustive && !control.stop.load(Ordering::Relaxed),
        nodes,
        root_branches: roots.len(),
        selected_branches: selected.len(),
        resumed_prefixes: resumed.into_inner(),
        elapsed: start.elapsed(),
    })
}

fn worker<'a>(prep: &'a Prepared, control: Option<&'a Control>, branch: usize) -> Worker<'a> {
    static IDLE: std::sync::OnceLock<Control> = std::sync::OnceLock::new();
    let idle = IDLE.get_or_init(|| Control {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        budget: None,
        deadline: None,
        limit: None,
        finished: Mutex::new(Vec::new()),
        cutoff: AtomicUsize::new(usize::MAX),
    });
    Worker {
        prep,
        control: control.unwrap_or(idle),
        branch,
        local_nodes: 0,
        buffers: Vec::new(),
        chosen: Vec::new(),
        found: Vec::new(),
        earlier: 0,
        aborted: false,
    }
}

/// Random-probe estimate of the search tree.
#[derive(Debug, Clone, Serialize)]
pub struct SizeEstimate {
    pub probes: usize,
    /// Estimated number of nodes in the selected part of the tree.
    pub nodes: f64,
    pub nodes_std_error: f64,
    /// Estimated number of systems (before isomorphism reduction).
    pub solutions: f64,
    pub mean_depth: f64,
    pub max_depth: usize,
    pub root_branches: usize,
}

/// Knuth's estimator: follow random root-to-leaf paths and average the
/// products of branching factors.
pub fn estimate_search_size(config: &SearchConfig, probes: usize, seed: u64) -> Result<SizeEstimate> {
    let prep = prepare(&config.scenario, config.k, &config.forced)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut buf = Vec::new();
    let mut root_branches = 0;
    let (mut sum, mut sum_sq, mut sols, mut depth_sum, mut max_depth) = (0.0, 0.0, 0.0, 0.0, 0);
    for _ in 0..probes.max(1) {
        let mut covered = prep.covered;
        let mut weight = 1.0;
        let mut estimate = 1.0;
        let mut depth = 0;
        loop {
            if prep.problem.children(&covered, &mut buf).is_none() {
                sols += weight;
                break;
            }
            if depth == 0 {
                buf = buf
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| config.branch.selects(*j))
                    .map(|(_, c)| *c)
                    .collect();
                root_branches = buf.len();
            }
            if buf.is_empty() {
                break;
            }
            weight *= buf.len() as f64;
            estimate += weight;
            let pick = buf[rng.gen_range(0..buf.len())];
            covered = covered.union(&pick.classes);
            depth += 1;
        }
        sum += estimate;
        sum_sq += estimate * estimate;
        depth_sum += depth as f64;
        max_depth = max_depth.max(depth);
    }
    let n = probes.max(1) as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(SizeEstimate {
        probes: probes.max(1),
        nodes: mean,
        nodes_std_error: (var / n).sqrt(),
        solutions: sols / n,
        mean_depth: depth_sum / n,
        max_depth,
        root_branches,
    })
}
