//! Point spaces and the group actions that generate designs.
//!
//! A scenario materializes one permutation of `0..v` per group element, so
//! `apply` is a table lookup. Global point indices follow the orbit-offset
//! scheme: orbit 0 occupies `0..n0`, orbit 1 the next `n1` indices, and so on,
//! with the fixed point (if any) last.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{pow_mod, GroupSpec, GroupTable};

/// One orbit of the point space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orbit {
    /// The group acting on itself by left multiplication.
    Regular { size: usize },
    /// `Z_n` acting by translation.
    Cyclic { size: usize },
    /// Action on the cosets of a subgroup (size = index).
    Quotient { size: usize },
    Fixed,
}

impl Orbit {
    pub fn size(&self) -> usize {
        match *self {
            Orbit::Regular { size } | Orbit::Cyclic { size } | Orbit::Quotient { size } => size,
            Orbit::Fixed => 1,
        }
    }
}

/// Printed name of a point: `12`, `12'`, `12''` or `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointLabel {
    Orbit { primes: usize, index: usize },
    Infinity,
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PointLabel::Orbit { primes, index } => {
                write!(f, "{index}")?;
                for _ in 0..primes {
                    f.write_str("'")?;
                }
                Ok(())
            }
            PointLabel::Infinity => f.write_str("∞"),
        }
    }
}

/// Ordered union of orbits with a global numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSpace {
    orbits: Vec<Orbit>,
    offsets: Vec<usize>,
    v: usize,
}

impl PointSpace {
    /// The fixed point, when present, must be the last orbit.
    pub fn new(orbits: Vec<Orbit>) -> Result<Self> {
        let fixed = orbits.iter().filter(|o| matches!(o, Orbit::Fixed)).count();
        if fixed > 1 || (fixed == 1 && !matches!(orbits.last(), Some(Orbit::Fixed))) {
            return Err(Error::Scenario("at most one fixed point, placed last".into()));
        }
        if orbits.iter().filter(|o| !matches!(o, Orbit::Fixed)).count() > 3 {
            return Err(Error::Scenario("labels support at most three non-fixed orbits".into()));
        }
        let mut offsets = Vec::with_capacity(orbits.len());
        let mut v = 0;
        for o in &orbits {
            offsets.push(v);
            v += o.size();
        }
        Ok(PointSpace { orbits, offsets, v })
    }

    /// Plain `0..v` numbering, used for designs without a scenario.
    pub fn plain(v: usize) -> Self {
        PointSpace { orbits: vec![Orbit::Cyclic { size: v }], offsets: vec![0], v }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn offset(&self, orbit: usize) -> usize {
        self.offsets[orbit]
    }

    pub fn has_fixed_point(&self) -> bool {
        matches!(self.orbits.last(), Some(Orbit::Fixed))
    }

    /// Index of the orbit containing `p`.
    pub fn orbit_of(&self, p: usize) -> usize {
        self.offsets.partition_point(|&o| o <= p) - 1
    }

    pub fn label(&self, p: usize) -> Result<PointLabel> {
        if p >= self.v {
            return Err(Error::PointOutOfRange { point: p, v: self.v });
        }
        let o = self.orbit_of(p);
        Ok(match self.orbits[o] {
            Orbit::Fixed => PointLabel::Infinity,
            _ => PointLabel::Orbit { primes: o, index: p - self.offsets[o] },
        })
    }

    pub fn point(&self, label: PointLabel) -> Result<usize> {
        match label {
            PointLabel::Infinity if self.has_fixed_point() => Ok(self.v - 1),
            PointLabel::Infinity => Err(Error::Scenario("this space has no fixed point ∞".into())),
            PointLabel::Orbit { primes, index } => {
                let regular = self.orbits.len() - usize::from(self.has_fixed_point());
                if primes >= regular {
                    return Err(Error::Scenario(format!(
                        "prime depth {primes} exceeds the {regular} labeled orbit(s)"
                    )));
                }
                let size = self.orbits[primes].size();
                if index >= size {
                    return Err(Error::Scenario(format!(
                        "label {label} out of range (orbit size {size})"
                    )));
                }
                Ok(self.offsets[primes] + index)
            }
        }
    }
}

/// The constructions supported by [`build_scenario`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    /// Left regular action plus one fixed point (1-rotational), `v = |G| + 1`.
    RegularPlusFixed,
    /// Left regular action, `v = |G|`.
    Regular,
    /// `Z_n` translating two copies of itself, `v = 2n`.
    CyclicTwoOrbit,
    /// As [`ScenarioKind::CyclicTwoOrbit`] plus a fixed point, `v = 2n + 1`.
    CyclicTwoOrbitPlusFixed,
    /// `Z_19 ⋊_7 Z_3` on orbits of sizes 57, 19, 19, 1.
    Frobenius57_19_19_1,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::RegularPlusFixed,
        ScenarioKind::Regular,
        ScenarioKind::CyclicTwoOrbit,
        ScenarioKind::CyclicTwoOrbitPlusFixed,
        ScenarioKind::Frobenius57_19_19_1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::RegularPlusFixed => "regular-plus-fixed",
            ScenarioKind::Regular => "regular",
            ScenarioKind::CyclicTwoOrbit => "cyclic-two-orbit",
            ScenarioKind::CyclicTwoOrbitPlusFixed => "cyclic-two-orbit-plus-fixed",
            ScenarioKind::Frobenius57_19_19_1 => "frobenius-57-19-19-1",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Scenario(format!("unknown scenario kind `{s}`")))
    }
}

/// A group, a point space and the materialized action.
#[derive(Debug, Clone)]
pub struct ActionScenario {
    kind: ScenarioKind,
    group: Arc<GroupTable>,
    space: PointSpace,
    /// `perms[g * v + p]` is the image of `p` under `g`.
    perms: Vec<u16>,
}

impl PartialEq for ActionScenario {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.space == other.space && self.perms == other.perms
    }
}

/// Builds the action for `kind` over `group`.
pub fn build_scenario(kind: ScenarioKind, group: Arc<GroupTable>) -> Result<ActionScenario> {
    let n = group.order();
    let cyclic_order = || match group.origin() {
        Some(GroupSpec::Cyclic(m)) => Ok(*m),
        _ => Err(Error::Scenario(format!("{kind} requires a cyclic group built as cyclic(n)"))),
    };
    let (orbits, perms) = match kind {
        ScenarioKind::RegularPlusFixed | ScenarioKind::Regular => {
            let fixed = kind == ScenarioKind::RegularPlusFixed;
            let v = n + usize::from(fixed);
            let mut perms = Vec::with_capacity(n * v);
            for g in 0..n {
                perms.extend(group.row(g).iter().copied());
                if fixed {
                    perms.push(n as u16);
                }
            }
            let mut orbits = vec![Orbit::Regular { size: n }];
            if fixed {
                orbits.push(Orbit::Fixed);
            }
            (orbits, perms)
        }
        ScenarioKind::CyclicTwoOrbit | ScenarioKind::CyclicTwoOrbitPlusFixed => {
            cyclic_order()?;
            let fixed = kind == ScenarioKind::CyclicTwoOrbitPlusFixed;
            let v = 2 * n + usize::from(fixed);
            let mut perms = Vec::with_capacity(n * v);
            for g in 0..n {
                for half in 0..2 {
                    perms.extend((0..n).map(|x| (half * n + (x + g) % n) as u16));
                }
                if fixed {
                    perms.push((2 * n) as u16);
                }
            }
            let mut orbits = vec![Orbit::Cyclic { size: n }, Orbit::Cyclic { size: n }];
            if fixed {
                orbits.push(Orbit::Fixed);
            }
            (orbits, perms)
        }
        ScenarioKind::Frobenius57_19_19_1 => {
            let spec = match group.origin() {
                Some(s @ GroupSpec::SemidirectCyclic { m: 19, c: 3, t: 7, .. }) => s.clone(),
                _ => {
                    return Err(Error::Scenario(format!(
                        "{kind} requires semidirect(19,3,7)"
                    )))
                }
            };
            let v = 96;
            let mut perms = Vec::with_capacity(n * v);
            for g in 0..n {
                let (a, b) = spec.semidirect_pair(g).unwrap();
                let tb = pow_mod(7, b, 19);
                perms.extend(group.row(g).iter().copied());
                for off in [57, 76] {
                    perms.extend((0..19).map(|x| (off + (a + tb * x) % 19) as u16));
                }
                perms.push(95);
            }
            let orbits = vec![
                Orbit::Regular { size: 57 },
                Orbit::Quotient { size: 19 },
                Orbit::Quotient { size: 19 },
                Orbit::Fixed,
            ];
            (orbits, perms)
        }
    };
    let space = PointSpace::new(orbits)?;
    debug_assert_eq!(perms.len(), n * space.v());
    Ok(ActionScenario { kind, group, space, perms })
}

impl ActionScenario {
    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }

    pub fn v(&self) -> usize {
        self.space.v()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Checked image of `p` under `g`.
    pub fn apply(&self, g: usize, p: usize) -> Result<usize> {
        if g >= self.order() {
            return Err(Error::ElementOutOfRange { element: g, order: self.order() });
        }
        if p >= self.v() {
            return Err(Error::PointOutOfRange { point: p, v: self.v() });
        }
        Ok(self.image(g, p))
    }

    #[inline]
    pub fn image(&self, g: usize, p: usize) -> usize {
        self.perms[g * self.space.v() + p] as usize
    }

    pub fn permutation(&self, g: usize) -> &[u16] {
        let v = self.v();
        &self.perms[g * v..(g + 1) * v]
    }

    /// Sorted image of a block.
    pub fn image_block(&self, g: usize, block: &[usize]) -> Vec<usize> {
        let mut b: Vec<usize> = block.iter().map(|&p| self.image(g, p)).collect();
        b.sort_unstable();
        b
    }

    fn check_block(&self, block: &[usize]) -> Result<()> {
        if let Some(&p) = block.iter().find(|&&p| p >= self.v()) {
            return Err(Error::PointOutOfRange { point: p, v: self.v() });
        }
        Ok(())
    }

    /// All distinct images `g·B`, sorted.
    pub fn block_orbit(&self, block: &[usize]) -> Result<Vec<Vec<usize>>> {
        self.check_block(block)?;
        let set: BTreeSet<Vec<usize>> =
            (0..self.order()).map(|g| self.image_block(g, block)).collect();
        Ok(set.into_iter().collect())
    }

    /// Elements `g` with `g·B = B`.
    pub fn stabilizer(&self, block: &[usize]) -> Vec<usize> {
        let mut sorted = block.to_vec();
        sorted.sort_unstable();
        (0..self.order()).filter(|&g| self.image_block(g, &sorted) == sorted).collect()
    }

    /// Lexicographically least block in the orbit of `block`.
    pub fn orbit_representative(&self, block: &[usize]) -> Vec<usize> {
        (0..self.order())
            .map(|g| self.image_block(g, block))
            .min()
            .unwrap_or_default()
    }

    /// Partition of all unordered point pairs into orbits.
    pub fn pair_classes(&self) -> PairClasses {
        PairClasses::compute(self)
    }

    /// `kind/group` descriptor, when the group came from a spec.
    pub fn descriptor(&self) -> Option<String> {
        self.group.origin().map(|g| format!("{}/{}", self.kind, g))
    }

    /// Parses `kind/group-spec` and builds the scenario.
    pub fn from_descriptor(text: &str) -> Result<ActionScenario> {
        let (kind, group) = text
            .split_once('/')
            .ok_or_else(|| Error::Scenario(format!("expected `kind/group`, got `{text}`")))?;
        let kind: ScenarioKind = kind.parse()?;
        let spec: GroupSpec = group.parse()?;
        build_scenario(kind, Arc::new(GroupTable::build(&spec)?))
    }
}

/// Orbits of unordered point pairs.
///
/// Classes are numbered by increasing size, ties broken by their
/// lexicographically least pair; short classes therefore come first.
#[derive(Debug, Clone)]
pub struct PairClasses {
    v: usize,
    reps: Vec<(usize, usize)>,
    sizes: Vec<usize>,
    lookup: Vec<u16>,
}

impl PairClasses {
    fn compute(s: &ActionScenario) -> PairClasses {
        let v = s.v();
        const UNSET: u32 = u32::MAX;
        let mut raw = vec![UNSET; v * v];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for p in 0..v {
            for q in p + 1..v {
                if raw[p * v + q] != UNSET {
                    continue;
                }
                let id = reps.len() as u32;
                let mut size = 0;
                for g in 0..s.order() {
                    let (a, b) = (s.image(g, p), s.image(g, q));
                    if raw[a * v + b] == UNSET {
                        raw[a * v + b] = id;
                        raw[b * v + a] = id;
                        size += 1;
                    }
                }
                reps.push((p, q));
                sizes.push(size);
            }
        }
        let mut order: Vec<usize> = (0..reps.len()).collect();
        order.sort_by_key(|&c| (sizes[c], reps[c]));
        let mut renumber = vec![0u16; reps.len()];
        for (new, &old) in order.iter().enumerate() {
            renumber[old] = new as u16;
        }
        let lookup = raw
            .iter()
            .map(|&c| if c == UNSET { u16::MAX } else { renumber[c as usize] })
            .collect();
        PairClasses {
            v,
            reps: order.iter().map(|&c| reps[c]).collect(),
            sizes: order.iter().map(|&c| sizes[c]).collect(),
            lookup,
        }
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn representative(&self, class: usize) -> (usize, usize) {
        self.reps[class]
    }

    pub fn size(&self, class: usize) -> usize {
        self.sizes[class]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Class of the pair `{p, q}` (`p != q`).
    #[inline]
    pub fn class_of(&self, p: usize, q: usize) -> usize {
        debug_assert_ne!(p, q);
        self.lookup[p * self.v + q] as usize
    }
}
