//! Embedded catalog of known base-block systems.
//!
//! Every entry carries its reference fingerprint and base blocks in
//! block-list notation. Families over groups whose element numbering is not
//! reproducible here are marked import-required: they expand only with a
//! user-supplied Cayley table.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::action::{build_scenario, PointLabel, ScenarioKind};
use crate::design::{BaseBlockSystem, Design};
use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupTable};
use crate::invariants::Fingerprint;
use crate::notation::{emit_blocks, parse_labels, resolve_block, ParseMode};
use crate::action::PointSpace;

const DATA: &str = include_str!("../data/catalog.txt");

/// Number of designs known for a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KnownCount {
    Exactly(usize),
    AtLeast(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct Family {
    pub id: &'static str,
    pub description: &'static str,
    pub kind: ScenarioKind,
    pub v: usize,
    pub k: usize,
    /// Group whose numbering matches the printed blocks, when known.
    pub group: Option<&'static str>,
    /// Canonical constructions of the abstract group, tried by numbering probes.
    pub candidates: &'static [&'static str],
    pub order: usize,
    pub known: KnownCount,
    pub provenance: &'static str,
}

impl Family {
    pub fn import_required(&self) -> bool {
        self.group.is_none()
    }

    pub fn group_spec(&self) -> Option<GroupSpec> {
        self.group.map(|g| g.parse().expect("catalog group specs parse"))
    }

    pub fn candidate_specs(&self) -> Vec<GroupSpec> {
        self.candidates.iter().map(|g| g.parse().expect("catalog group specs parse")).collect()
    }
}

pub const FAMILIES: &[Family] = &[
    Family {
        id: "S266-SL25-rot",
        description: "1-rotational S(2,6,121) over SL(2,5)",
        kind: ScenarioKind::RegularPlusFixed,
        v: 121,
        k: 6,
        group: None,
        candidates: &["sl25"],
        order: 120,
        known: KnownCount::Exactly(24),
        provenance: "new type of 1-rotational design",
    },
    Family {
        id: "S266-SG135-3-rot",
        description: "1-rotational S(2,6,136) over C5 x ((C3 x C3) : C3)",
        kind: ScenarioKind::RegularPlusFixed,
        v: 136,
        k: 6,
        group: None,
        candidates: &["direct(cyclic(5),heisenberg(3))"],
        order: 135,
        known: KnownCount::Exactly(11),
        provenance: "new type of 1-rotational design",
    },
    Family {
        id: "S266-SG135-4-rot",
        description: "1-rotational S(2,6,136) over C5 x (C9 : C3)",
        kind: ScenarioKind::RegularPlusFixed,
        v: 136,
        k: 6,
        group: None,
        candidates: &["direct(cyclic(5),semidirect(9,3,4))"],
        order: 135,
        known: KnownCount::Exactly(20),
        provenance: "Mills",
    },
    Family {
        id: "S266-SG155-1-rot",
        description: "1-rotational S(2,6,156) over C31 : C5",
        kind: ScenarioKind::RegularPlusFixed,
        v: 156,
        k: 6,
        group: None,
        candidates: &["semidirect(31,5,2)"],
        order: 155,
        known: KnownCount::AtLeast(1),
        provenance: "1-rotational, non-abelian group of order 155",
    },
    Family {
        id: "S266-Z155-rot",
        description: "1-rotational S(2,6,156) over Z155",
        kind: ScenarioKind::RegularPlusFixed,
        v: 156,
        k: 6,
        group: Some("cyclic(155)"),
        candidates: &["cyclic(155)", "direct(cyclic(5),cyclic(31))"],
        order: 155,
        known: KnownCount::AtLeast(16),
        provenance: "1-rotational, cyclic group of order 155",
    },
    Family {
        id: "S28-S5-regular",
        description: "S(2,8,120) from the regular action of S5",
        kind: ScenarioKind::Regular,
        v: 120,
        k: 8,
        group: None,
        candidates: &[],
        order: 120,
        known: KnownCount::AtLeast(3),
        provenance: "automorphism groups S6, A5:S3 and one of order 322560",
    },
    Family {
        id: "S266-Z48-two-orbit",
        description: "S(2,6,96), Z48 on two orbits of size 48",
        kind: ScenarioKind::CyclicTwoOrbit,
        v: 96,
        k: 6,
        group: Some("cyclic(48)"),
        candidates: &["cyclic(48)"],
        order: 48,
        known: KnownCount::Exactly(1),
        provenance: "Mills",
    },
    Family {
        id: "S266-Z53-two-orbit",
        description: "S(2,6,106), Z53 on two orbits of size 53",
        kind: ScenarioKind::CyclicTwoOrbit,
        v: 106,
        k: 6,
        group: Some("cyclic(53)"),
        candidates: &["cyclic(53)"],
        order: 53,
        known: KnownCount::Exactly(66),
        provenance: "Mills",
    },
    Family {
        id: "S266-Z55-three-orbit",
        description: "S(2,6,111), Z55 on two orbits of size 55 and a fixed point",
        kind: ScenarioKind::CyclicTwoOrbitPlusFixed,
        v: 111,
        k: 6,
        group: Some("cyclic(55)"),
        candidates: &["cyclic(55)"],
        order: 55,
        known: KnownCount::Exactly(4),
        provenance: "new designs",
    },
    Family {
        id: "S266-F57-four-orbit",
        description: "S(2,6,96), Z19 x| Z3 on orbits of size 57, 19, 19, 1",
        kind: ScenarioKind::Frobenius57_19_19_1,
        v: 96,
        k: 6,
        group: Some("semidirect(19,3,7,row-major)"),
        candidates: &["semidirect(19,3,7)", "semidirect(19,3,7,row-major)"],
        order: 57,
        known: KnownCount::AtLeast(4),
        provenance: "partial search",
    },
];

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub family: &'static Family,
    /// 1-based position within the family.
    pub index: usize,
    #[serde(serialize_with = "labels_as_text")]
    pub base_blocks: Vec<Vec<PointLabel>>,
    #[serde(serialize_with = "fingerprint_as_text")]
    pub printed_fingerprint: Fingerprint,
}

fn labels_as_text<S: serde::Serializer>(blocks: &[Vec<PointLabel>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = blocks.iter().map(|b| b.iter().map(ToString::to_string).collect()).collect();
    serde::Serialize::serialize(&text, s)
}

fn fingerprint_as_text<S: serde::Serializer>(f: &Fingerprint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

impl CatalogEntry {
    pub fn import_required(&self) -> bool {
        self.family.import_required()
    }

    /// Builds the base-block system over the family group, or over `table`
    /// when one is supplied.
    pub fn system(&self, table: Option<Arc<GroupTable>>) -> Result<BaseBlockSystem> {
        let group = match table {
            Some(t) => t,
            None => {
                let spec = self.family.group_spec().ok_or_else(|| Error::ImportRequired(self.id.clone()))?;
                Arc::new(GroupTable::build(&spec)?)
            }
        };
        if group.order() != self.family.order {
            return Err(Error::Scenario(format!(
                "{} needs a group of order {}, got {}",
                self.id,
                self.family.order,
                group.order()
            )));
        }
        let scenario = Arc::new(build_scenario(self.family.kind, group)?);
        let blocks = self
            .base_blocks
            .iter()
            .map(|b| resolve_block(b, scenario.space()))
            .collect::<Result<Vec<_>>>()?;
        BaseBlockSystem::new(scenario, blocks)
    }

    pub fn expand(&self, table: Option<Arc<GroupTable>>) -> Result<Design> {
        self.system(table)?.expand()
    }

    /// Base blocks in block-list notation.
    pub fn blocks_text(&self) -> String {
        let space = self.label_space();
        let blocks: Vec<Vec<usize>> = self
            .base_blocks
            .iter()
            .map(|b| resolve_block(b, &space).expect("catalog labels fit their space"))
            .collect();
        emit_blocks(&blocks, &space)
    }

    /// Point space of the family, independent of the group numbering.
    pub fn label_space(&self) -> PointSpace {
        use crate::action::Orbit;
        let n = self.family.order;
        let orbits = match self.family.kind {
            ScenarioKind::RegularPlusFixed => vec![Orbit::Regular { size: n }, Orbit::Fixed],
            ScenarioKind::Regular => vec![Orbit::Regular { size: n }],
            ScenarioKind::CyclicTwoOrbit => vec![Orbit::Cyclic { size: n }; 2],
            ScenarioKind::CyclicTwoOrbitPlusFixed => {
                vec![Orbit::Cyclic { size: n }, Orbit::Cyclic { size: n }, Orbit::Fixed]
            }
            ScenarioKind::Frobenius57_19_19_1 => vec![
                Orbit::Regular { size: 57 },
                Orbit::Quotient { size: 19 },
                Orbit::Quotient { size: 19 },
                Orbit::Fixed,
            ],
        };
        PointSpace::new(orbits).expect("catalog spaces are well formed")
    }
}

fn load() -> Vec<CatalogEntry> {
    let mut entries = Vec::new();
    let mut family: Option<&'static Family> = None;
    let mut index = 0;
    for (n, line) in DATA.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(id) = line.strip_prefix("family ") {
            family = Some(FAMILIES.iter().find(|f| f.id == id.trim()).unwrap_or_else(|| panic!("line {n}: unknown family {id}")));
            index = 0;
            continue;
        }
        let family = family.unwrap_or_else(|| panic!("line {n}: entry before any family"));
        let split = line.find('}').unwrap_or_else(|| panic!("line {n}: missing fingerprint"));
        let printed_fingerprint: Fingerprint = line[..=split].parse().unwrap_or_else(|e| panic!("line {n}: {e}"));
        let base_blocks = parse_labels(&line[split + 1..], ParseMode::Strict).unwrap_or_else(|e| panic!("line {n}: {e}"));
        index += 1;
        entries.push(CatalogEntry {
            id: format!("{}-{index:02}", family.id),
            family,
            index,
            base_blocks,
            printed_fingerprint,
        });
    }
    entries
}

/// All entries, in family order.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(load)
}

pub fn catalog_lookup(id: &str) -> Result<&'static CatalogEntry> {
    catalog().iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownCatalogId(id.to_string()))
}

pub fn family(id: &str) -> Option<&'static Family> {
    FAMILIES.iter().find(|f| f.id == id)
}

pub fn family_entries(id: &str) -> impl Iterator<Item = &'static CatalogEntry> + '_ {
    catalog().iter().filter(move |e| e.family.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_blocks;

    #[test]
    fn family_sizes() {
        let expected = [24, 11, 20, 1, 16, 3, 1, 66, 4, 4];
        for (f, n) in FAMILIES.iter().zip(expected) {
            assert_eq!(family_entries(f.id).count(), n, "{}", f.id);
        }
        assert_eq!(catalog().len(), 150);
    }

    #[test]
    fn lookup() {
        let e = catalog_lookup("S266-Z53-two-orbit-01").unwrap();
        assert_eq!(e.printed_fingerprint.to_string(), "{0=530, 1=41128, 2=521202, 3=1957396, 4=1931744}");
        let sl = catalog_lookup("S266-SL25-rot-01").unwrap();
        assert!(sl.import_required());
        assert!(matches!(sl.expand(None), Err(Error::ImportRequired(_))));
        assert!(matches!(catalog_lookup("no-such-id"), Err(Error::UnknownCatalogId(_))));
    }

    #[test]
    fn entries_are_well_formed() {
        for e in catalog() {
            assert!(e.base_blocks.iter().all(|b| b.len() == e.family.k), "{}", e.id);
            let text = e.blocks_text();
            let again = parse_blocks(&text, &e.label_space(), ParseMode::Strict, Some(e.family.k)).unwrap();
            assert_eq!(emit_blocks(&again.blocks, &e.label_space()), text);
        }
    }

    #[test]
    fn mills_entry_expands() {
        let d = catalog_lookup("S266-Z48-two-orbit-01").unwrap().expand(None).unwrap();
        assert_eq!(d.b(), 304);
    }
}
