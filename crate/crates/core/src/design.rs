//! Explicit designs, base-block systems and the Steiner check.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::action::{build_scenario, ActionScenario, PointLabel, PointSpace, ScenarioKind};
use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupTable};
use crate::notation::{parse_labels, resolve_block, ParseMode};

/// An incidence structure on `0..v` with blocks of size `k`.
///
/// Blocks are sorted internally and the block list is sorted
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Design {
    v: usize,
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl Design {
    pub fn new(v: usize, k: usize, mut blocks: Vec<Vec<usize>>) -> Result<Design> {
        if k < 2 || v <= k {
            return Err(Error::InvalidDesign(format!("need v > k >= 2, got v = {v}, k = {k}")));
        }
        for (i, b) in blocks.iter_mut().enumerate() {
            b.sort_unstable();
            if b.len() != k {
                return Err(Error::InvalidDesign(format!("block {i} has {} points, expected {k}", b.len())));
            }
            if let Some(&p) = b.iter().find(|&&p| p >= v) {
                return Err(Error::PointOutOfRange { point: p, v });
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidDesign(format!("block {i} repeats a point")));
            }
        }
        blocks.sort_unstable();
        if let Some(w) = blocks.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidDesign(format!("duplicate block {:?}", w[0])));
        }
        Ok(Design { v, k, blocks })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Image under the point map `p -> perm[p]`.
    pub fn relabel(&self, perm: &[usize]) -> Design {
        assert_eq!(perm.len(), self.v, "relabeling must cover every point");
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&p| perm[p]).collect()).collect();
        Design::new(self.v, self.k, blocks).expect("a permutation maps a design to a design")
    }

    /// Same design with one block removed (useful for negative tests).
    pub fn without_block(&self, index: usize) -> Design {
        let mut blocks = self.blocks.clone();
        blocks.remove(index);
        Design { v: self.v, k: self.k, blocks }
    }
}

/// Result of [`verify_steiner`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub v: usize,
    pub k: usize,
    pub b: usize,
    /// `(v-1)/(k-1)` when integral.
    pub r: Option<usize>,
    pub uncovered: Vec<(usize, usize)>,
    /// Pairs on more than one block, with their multiplicity.
    pub multiply_covered: Vec<((usize, usize), usize)>,
    /// Points whose replication differs from `r`.
    pub irregular_points: Vec<usize>,
}

#[inline]
fn tri(v: usize, p: usize, q: usize) -> usize {
    debug_assert!(p < q);
    p * (2 * v - p - 1) / 2 + (q - p - 1)
}

/// Checks that every unordered pair lies on exactly one block.
pub fn verify_steiner(design: &Design) -> VerificationReport {
    let (v, k) = (design.v, design.k);
    let mut counts = vec![0u32; v * (v - 1) / 2];
    let mut degree = vec![0usize; v];
    for b in &design.blocks {
        for (i, &p) in b.iter().enumerate() {
            degree[p] += 1;
            for &q in &b[i + 1..] {
                counts[tri(v, p, q)] += 1;
            }
        }
    }
    let mut uncovered = Vec::new();
    let mut multiply_covered = Vec::new();
    for p in 0..v {
        for q in p + 1..v {
            match counts[tri(v, p, q)] {
                0 => uncovered.push((p, q)),
                1 => {}
                c => multiply_covered.push(((p, q), c as usize)),
            }
        }
    }
    let r = ((v - 1) % (k - 1) == 0).then(|| (v - 1) / (k - 1));
    let irregular_points = (0..v).filter(|&p| Some(degree[p]) != r).collect::<Vec<_>>();
    VerificationReport {
        pass: uncovered.is_empty() && multiply_covered.is_empty() && irregular_points.is_empty(),
        v,
        k,
        b: design.blocks.len(),
        r,
        uncovered,
        multiply_covered,
        irregular_points,
    }
}

/// Necessary divisibility conditions for S(2,k,v).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
}

pub fn admissible(v: usize, k: usize) -> Admissibility {
    let no = |reason: String| Admissibility { admissible: false, reason };
    if k < 2 || v <= k {
        return no(format!("need v > k >= 2 (v = {v}, k = {k})"));
    }
    if !(v - 1).is_multiple_of(k - 1) {
        return no(format!("v-1 = {} is not divisible by k-1 = {}", v - 1, k - 1));
    }
    if !(v * (v - 1)).is_multiple_of(k * (k - 1)) {
        return no(format!("v(v-1) = {} is not divisible by k(k-1) = {}", v * (v - 1), k * (k - 1)));
    }
    Admissibility {
        admissible: true,
        reason: format!("r = {}, b = {}", (v - 1) / (k - 1), v * (v - 1) / (k * (k - 1))),
    }
}

/// `Err(Inadmissible)` unless S(2,k,v) passes the divisibility conditions.
pub fn require_admissible(v: usize, k: usize) -> Result<()> {
    let a = admissible(v, k);
    if a.admissible {
        Ok(())
    } else {
        Err(Error::Inadmissible { v, k, reason: a.reason })
    }
}

/// A scenario plus base blocks: the compressed form of a design.
#[derive(Debug, Clone)]
pub struct BaseBlockSystem {
    scenario: Arc<ActionScenario>,
    base_blocks: Vec<Vec<usize>>,
}

impl BaseBlockSystem {
    pub fn new(scenario: Arc<ActionScenario>, mut base_blocks: Vec<Vec<usize>>) -> Result<Self> {
        let v = scenario.v();
        for b in &mut base_blocks {
            b.sort_unstable();
            if let Some(&p) = b.iter().find(|&&p| p >= v) {
                return Err(Error::PointOutOfRange { point: p, v });
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidDesign("base block repeats a point".into()));
            }
        }
        Ok(BaseBlockSystem { scenario, base_blocks })
    }

    /// Parses base blocks in block-list notation over the scenario's space.
    pub fn parse(scenario: Arc<ActionScenario>, text: &str, mode: ParseMode) -> Result<Self> {
        let labels = parse_labels(text, mode)?;
        let blocks = labels
            .iter()
            .map(|b| resolve_block(b, scenario.space()))
            .collect::<Result<Vec<_>>>()?;
        BaseBlockSystem::new(scenario, blocks)
    }

    pub fn scenario(&self) -> &Arc<ActionScenario> {
        &self.scenario
    }

    pub fn base_blocks(&self) -> &[Vec<usize>] {
        &self.base_blocks
    }

    pub fn k(&self) -> Option<usize> {
        self.base_blocks.first().map(Vec::len)
    }

    /// Union of the block orbits.
    ///
    /// Two base blocks generating the same orbit is an error.
    pub fn expand(&self) -> Result<Design> {
        let k = self.k().ok_or_else(|| Error::InvalidDesign("no base blocks".into()))?;
        if self.base_blocks.iter().any(|b| b.len() != k) {
            return Err(Error::InvalidDesign("base blocks have different sizes".into()));
        }
        let mut owner: HashMap<Vec<usize>, usize> = HashMap::new();
        for (i, base) in self.base_blocks.iter().enumerate() {
            for block in self.scenario.block_orbit(base)? {
                if let Some(&first) = owner.get(&block) {
                    if first != i {
                        return Err(Error::OrbitCollision { first, second: i });
                    }
                }
                owner.insert(block, i);
            }
        }
        Design::new(self.scenario.v(), k, owner.into_keys().collect())
    }

    /// One lexicographically least representative per block orbit of `design`.
    pub fn from_design(scenario: Arc<ActionScenario>, design: &Design) -> Result<Self> {
        if design.v() != scenario.v() {
            return Err(Error::Scenario(format!(
                "design has v = {}, scenario has v = {}",
                design.v(),
                scenario.v()
            )));
        }
        let mut reps: Vec<Vec<usize>> =
            design.blocks().iter().map(|b| scenario.orbit_representative(b)).collect();
        reps.sort_unstable();
        reps.dedup();
        BaseBlockSystem::new(scenario, reps)
    }

    /// Base blocks replaced by their orbit representatives, sorted.
    pub fn canonical(&self) -> BaseBlockSystem {
        let mut reps: Vec<Vec<usize>> =
            self.base_blocks.iter().map(|b| self.scenario.orbit_representative(b)).collect();
        reps.sort_unstable();
        BaseBlockSystem { scenario: self.scenario.clone(), base_blocks: reps }
    }

    /// Orbit lengths of the base blocks, in order.
    pub fn orbit_profile(&self) -> Vec<usize> {
        self.base_blocks
            .iter()
            .map(|b| self.scenario.order() / self.scenario.stabilizer(b).len())
            .collect()
    }
}

/// One candidate tried by [`resolve_numbering`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NumberingAttempt {
    pub spec: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct NumberingOutcome {
    /// First candidate whose expansion verifies.
    pub resolved: Option<(GroupSpec, Design)>,
    pub attempts: Vec<NumberingAttempt>,
}

/// Tries each candidate numbering in order and stops at the first whose
/// expansion of `base_blocks` is a Steiner system.
pub fn resolve_numbering(
    candidates: &[GroupSpec],
    kind: ScenarioKind,
    base_blocks: &[Vec<PointLabel>],
) -> Result<NumberingOutcome> {
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    let orders: Vec<usize> = candidates.iter().filter_map(GroupSpec::order).collect();
    if orders.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::GroupSpec(format!("candidates have different orders {orders:?}")));
    }
    let mut attempts = Vec::new();
    for spec in candidates {
        let tried = (|| -> Result<(Design, VerificationReport)> {
            let group = Arc::new(GroupTable::build(spec)?);
            let scenario = Arc::new(build_scenario(kind, group)?);
            let blocks = base_blocks
                .iter()
                .map(|b| resolve_block(b, scenario.space()))
                .collect::<Result<Vec<_>>>()?;
            let design = BaseBlockSystem::new(scenario, blocks)?.expand()?;
            let report = verify_steiner(&design);
            Ok((design, report))
        })();
        match tried {
            Ok((design, report)) if report.pass => {
                attempts.push(NumberingAttempt {
                    spec: spec.to_string(),
                    passed: true,
                    detail: format!("verified, b = {}", report.b),
                });
                return Ok(NumberingOutcome { resolved: Some((spec.clone(), design)), attempts });
            }
            Ok((_, report)) => attempts.push(NumberingAttempt {
                spec: spec.to_string(),
                passed: false,
                detail: format!(
                    "b = {}, {} uncovered, {} multiply covered pairs",
                    report.b,
                    report.uncovered.len(),
                    report.multiply_covered.len()
                ),
            }),
            Err(e) => attempts.push(NumberingAttempt {
                spec: spec.to_string(),
                passed: false,
                detail: e.to_string(),
            }),
        }
    }
    Ok(NumberingOutcome { resolved: None, attempts })
}

/// On-disk design: TOML with `v`, `k`, an optional scenario descriptor and
/// either explicit `blocks` or `base_blocks` to expand, as label strings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DesignFile {
    pub v: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_blocks: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<Vec<String>>,
}

fn label_strings(blocks: &[Vec<usize>], space: &PointSpace) -> Vec<Vec<String>> {
    blocks
        .iter()
        .map(|b| b.iter().map(|&p| space.label(p).unwrap().to_string()).collect())
        .collect()
}

fn parse_label_blocks(blocks: &[Vec<String>], space: &PointSpace) -> Result<Vec<Vec<usize>>> {
    blocks
        .iter()
        .map(|b| {
            let labels = parse_labels(&format!("[{}]", b.join(",")), ParseMode::Strict)?;
            resolve_block(labels.first().map_or(&[][..], |l| l), space)
        })
        .collect()
}

impl DesignFile {
    pub fn from_design(design: &Design, scenario: Option<&ActionScenario>) -> DesignFile {
        let plain = PointSpace::plain(design.v());
        let space = scenario.map_or(&plain, |s| s.space());
        DesignFile {
            v: design.v(),
            k: design.k(),
            scenario: scenario.and_then(ActionScenario::descriptor),
            base_blocks: None,
            blocks: label_strings(design.blocks(), space),
        }
    }

    pub fn from_system(system: &BaseBlockSystem) -> DesignFile {
        let s = system.scenario();
        DesignFile {
            v: s.v(),
            k: system.k().unwrap_or(0),
            scenario: s.descriptor(),
            base_blocks: Some(label_strings(system.base_blocks(), s.space())),
            blocks: Vec::new(),
        }
    }

    pub fn scenario(&self) -> Result<Option<ActionScenario>> {
        self.scenario.as_deref().map(ActionScenario::from_descriptor).transpose()
    }

    /// Builds the explicit design, expanding `base_blocks` when present.
    pub fn to_design(&self) -> Result<Design> {
        let scenario = self.scenario()?;
        if let Some(s) = &scenario {
            if s.v() != self.v {
                return Err(Error::Scenario(format!("file says v = {}, scenario has v = {}", self.v, s.v())));
            }
        }
        let plain = PointSpace::plain(self.v);
        let space = scenario.as_ref().map_or(&plain, |s| s.space());
        let mut blocks = parse_label_blocks(&self.blocks, space)?;
        if let Some(base) = &self.base_blocks {
            let s = scenario.ok_or_else(|| Error::Scenario("base_blocks need a scenario".into()))?;
            let base = parse_label_blocks(base, s.space())?;
            let expanded = BaseBlockSystem::new(Arc::new(s), base)?.expand()?;
            blocks.extend(expanded.blocks().iter().cloned());
        }
        Design::new(self.v, self.k, blocks)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("design files always serialize")
    }

    pub fn from_toml(text: &str) -> Result<DesignFile> {
        toml::from_str(text).map_err(|e| {
            Error::parse(e.span().map_or(0, |s| s.start), e.message().to_string())
        })
    }

    pub fn read(path: &Path) -> Result<DesignFile> {
        DesignFile::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml())?;
        Ok(())
    }
}

/// Reads a design file and returns the explicit design.
pub fn load_design(path: &Path) -> Result<Design> {
    DesignFile::read(path)?.to_design()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MILLS: &str = "[[0, 8, 16, 24, 32, 40], [0', 8', 16', 24', 32', 40'], \
        [0, 1, 3, 13, 28, 0'], [0, 4, 11, 17', 36', 38'], [0, 5, 19, 1', 24', 42'], \
        [0, 9, 26, 4', 7', 40'], [0, 6, 8', 9', 18', 22'], [0, 18, 11', 28', 33', 39']]";

    fn mills() -> BaseBlockSystem {
        let s = ActionScenario::from_descriptor("cyclic-two-orbit/cyclic(48)").unwrap();
        BaseBlockSystem::parse(Arc::new(s), MILLS, ParseMode::Strict).unwrap()
    }

    #[test]
    fn mills_expands_and_verifies() {
        let sys = mills();
        assert_eq!(sys.orbit_profile(), vec![8, 8, 48, 48, 48, 48, 48, 48]);
        let d = sys.expand().unwrap();
        let rep = verify_steiner(&d);
        assert!(rep.pass);
        assert_eq!((rep.b, rep.r), (304, Some(19)));

        let broken = d.without_block(17);
        let rep = verify_steiner(&broken);
        assert!(!rep.pass);
        assert_eq!(rep.uncovered.len(), 15);
        assert!(rep.multiply_covered.is_empty());

        let mut dup = d.blocks().to_vec();
        dup.push(dup[3].clone());
        assert!(Design::new(96, 6, dup).is_err());
    }

    #[test]
    fn extraction_round_trip() {
        let sys = mills();
        let d = sys.expand().unwrap();
        let back = BaseBlockSystem::from_design(sys.scenario().clone(), &d).unwrap();
        assert_eq!(back.base_blocks(), sys.canonical().base_blocks());
        assert_eq!(back.expand().unwrap(), d);
    }

    #[test]
    fn orbit_collision_is_an_error() {
        let sys = mills();
        let mut blocks = sys.base_blocks().to_vec();
        let shifted = sys.scenario().image_block(7, &blocks[2]);
        blocks.push(shifted);
        let sys = BaseBlockSystem::new(sys.scenario().clone(), blocks).unwrap();
        assert!(matches!(sys.expand(), Err(Error::OrbitCollision { first: 2, second: 8 })));
    }

    #[test]
    fn admissibility() {
        assert!(admissible(96, 6).admissible);
        assert!(!admissible(100, 6).admissible);
        assert!(admissible(7, 3).admissible);
        assert!(!admissible(5, 3).admissible);
        assert!(!admissible(6, 3).admissible);
        assert!(!admissible(3, 3).admissible);
    }

    #[test]
    fn resolve_mills_numbering() {
        let labels = parse_labels(MILLS, ParseMode::Strict).unwrap();
        let out = resolve_numbering(&[GroupSpec::Cyclic(48)], ScenarioKind::CyclicTwoOrbit, &labels).unwrap();
        assert_eq!(out.resolved.unwrap().0, GroupSpec::Cyclic(48));
        assert!(resolve_numbering(&[], ScenarioKind::CyclicTwoOrbit, &labels).is_err());
    }

    #[test]
    fn design_file_round_trip() {
        let sys = mills();
        let d = sys.expand().unwrap();
        let file = DesignFile::from_design(&d, Some(sys.scenario()));
        let back = DesignFile::from_toml(&file.to_toml()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_design().unwrap(), d);

        let compact = DesignFile::from_system(&sys);
        let text = compact.to_toml();
        assert!(text.contains("0'"));
        assert_eq!(DesignFile::from_toml(&text).unwrap().to_design().unwrap(), d);
        assert!(DesignFile::from_toml("v = 3\nk = ").is_err());
    }
}
