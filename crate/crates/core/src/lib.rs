//! Group-generated Steiner systems S(2,k,v).
//!
//! The crate builds finite groups as Cayley tables, lets them act on point
//! spaces made of orbits, expands base blocks into full designs and checks
//! the Steiner property. On top of that sit an isomorphism toolkit
//! (fingerprint census, canonical labeling, automorphism counts) and an
//! exhaustive exact-cover search over pair classes.

pub mod action;
pub mod catalog;
pub mod design;
pub mod error;
pub mod group;
pub mod invariants;
pub mod notation;
pub mod search;

pub use action::{build_scenario, ActionScenario, Orbit, PairClasses, PointLabel, PointSpace, ScenarioKind};
pub use catalog::{catalog, catalog_lookup, CatalogEntry, Family, FAMILIES};
pub use design::{admissible, resolve_numbering, verify_steiner, BaseBlockSystem, Design, DesignFile, VerificationReport};
pub use error::{Error, Result, TableDiagnostic};
pub use group::{GroupSpec, GroupTable, PairNumbering, MAX_ORDER};
pub use invariants::{
    are_isomorphic, automorphism_count, canonical_certificate, fingerprint, CanonicalCertificate, Fingerprint,
    IsoOutcome,
};
pub use notation::{emit_block, emit_blocks, parse_blocks, parse_labels, ParseMode};
pub use search::{
    brute_force_oracle, enumerate_designs, estimate_search_size, isomorphism_classes, Branch, SearchConfig,
    SearchOutcome,
};
