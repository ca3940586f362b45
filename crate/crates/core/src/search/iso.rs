use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::design::Design;
use crate::error::{Error, Result};
use crate::invariants::{canonical_certificate, fingerprint, Fingerprint};

/// Designs in one isomorphism class, by index into the input list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub fingerprint: Fingerprint,
}

/// Partitions designs into isomorphism classes.
///
/// Designs are first grouped by fingerprint; canonical certificates are
/// only computed inside groups with more than one member.
pub fn isomorphism_classes(designs: &[Design]) -> Result<Vec<IsoClass>> {
    if let Some(first) = designs.first() {
        if let Some(d) = designs.iter().find(|d| (d.v(), d.k()) != (first.v(), first.k())) {
            return Err(Error::InvalidDesign(format!(
                "parameter mismatch: S(2,{},{}) and S(2,{},{})",
                first.k(),
                first.v(),
                d.k(),
                d.v()
            )));
        }
    }
    let prints = designs.par_iter().map(fingerprint).collect::<Result<Vec<_>>>()?;
    let mut groups: BTreeMap<&Fingerprint, Vec<usize>> = BTreeMap::new();
    for (i, f) in prints.iter().enumerate() {
        groups.entry(f).or_default().push(i);
    }
    let needs_cert: Vec<usize> = groups.values().filter(|g| g.len() > 1).flatten().copied().collect();
    let certs = needs_cert
        .par_iter()
        .map(|&i| canonical_certificate(&designs[i]).map(|c| (i, c.design)))
        .collect::<Result<BTreeMap<_, _>>>()?;

    let mut classes = Vec::new();
    for (f, members) in groups {
        let mut by_form: Vec<(Option<&Design>, Vec<usize>)> = Vec::new();
        for i in members {
            let form = certs.get(&i);
            match by_form.iter_mut().find(|(g, _)| g.is_some() && *g == form) {
                Some((_, m)) => m.push(i),
                None => by_form.push((form, vec![i])),
            }
        }
        for (_, members) in by_form {
            classes.push(IsoClass { representative: members[0], members, fingerprint: f.clone() });
        }
    }
    classes.sort_by_key(|c| c.representative);
    Ok(classes)
}
