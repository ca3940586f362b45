//! Isomorphism invariants: the line-configuration fingerprint, canonical
//! certificates and automorphism group orders.

mod canon;
mod fingerprint;

pub use canon::{
    are_isomorphic, automorphism_count, canonical_certificate, canonical_form_with_group,
    isomorphism_from_certificates, CanonStats, CanonicalCertificate, IsoOutcome,
};
pub use fingerprint::{fingerprint, Fingerprint, PairBlockIndex};
