use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::design::{verify_steiner, Design};
use crate::error::{Error, Result};

/// For every unordered point pair, the block through it.
///
/// Only defined for Steiner systems, where that block is unique.
#[derive(Debug, Clone)]
pub struct PairBlockIndex {
    v: usize,
    line: Vec<u32>,
}

impl PairBlockIndex {
    pub fn new(design: &Design) -> Result<PairBlockIndex> {
        if !verify_steiner(design).pass {
            return Err(Error::Unverified);
        }
        Ok(Self::build(design))
    }

    pub(crate) fn build(design: &Design) -> PairBlockIndex {
        let v = design.v();
        let mut line = vec![u32::MAX; v * v];
        for (i, b) in design.blocks().iter().enumerate() {
            for &p in b {
                for &q in b {
                    if p != q {
                        line[p * v + q] = i as u32;
                    }
                }
            }
        }
        PairBlockIndex { v, line }
    }

    /// Index of the block through `p` and `q` (`p != q`).
    #[inline]
    pub fn block(&self, p: usize, q: usize) -> usize {
        self.line[p * self.v + q] as usize
    }
}

/// Histogram of the local line-configuration census.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    counts: BTreeMap<usize, u64>,
}

impl Fingerprint {
    pub fn from_counts(counts: impl IntoIterator<Item = (usize, u64)>) -> Fingerprint {
        Fingerprint { counts: counts.into_iter().filter(|&(_, c)| c > 0).collect() }
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn get(&self, key: usize) -> u64 {
        self.counts.get(&key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `b·k(k-1)(k-2)(v-k)`: the number of configurations in the census.
    pub fn expected_total(v: usize, k: usize, b: usize) -> u64 {
        (b * k * (k - 1) * k.saturating_sub(2) * (v - k)) as u64
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.counts.iter().map(|(k, c)| format!("{k}={c}")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

impl FromStr for Fingerprint {
    type Err = Error;

    /// Accepts `{1=37632, 2=492192}`, with or without the braces, and the
    /// escaped braces `\{ \}` of typeset sources.
    fn from_str(s: &str) -> Result<Fingerprint> {
        let inner = s.trim().trim_start_matches('\\').trim_start_matches('{');
        let inner = inner.trim_end().trim_end_matches('}').trim_end_matches('\\');
        let mut counts = BTreeMap::new();
        for item in inner.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (k, c) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(0, format!("expected key=count, got `{item}`")))?;
            let key: usize = k.trim().parse().map_err(|_| Error::parse(0, format!("bad key `{k}`")))?;
            let count: u64 = c.trim().parse().map_err(|_| Error::parse(0, format!("bad count `{c}`")))?;
            if counts.insert(key, count).is_some() {
                return Err(Error::parse(0, format!("key {key} repeated")));
            }
        }
        Ok(Fingerprint::from_counts(counts))
    }
}

/// Line-configuration census of a Steiner system.
///
/// For each block `l`, ordered triple `(y, z, w)` of distinct points of `l`
/// and point `x` off `l`, with `m = line(x, y)` and `t = line(x, w)`, the
/// key is the number of `u` in `m \ {x, y}` whose line to `z` misses `t`.
pub fn fingerprint(design: &Design) -> Result<Fingerprint> {
    let index = PairBlockIndex::new(design)?;
    Ok(census(design, &index))
}

fn census(design: &Design, index: &PairBlockIndex) -> Fingerprint {
    let (v, k) = (design.v(), design.k());
    let blocks = design.blocks();
    let b = blocks.len();
    let words = b.div_ceil(64);
    // meets[n * words ..] has bit t set when blocks n and t share a point
    let mut meets = vec![0u64; b * words];
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); v];
    for (i, blk) in blocks.iter().enumerate() {
        for &p in blk {
            through[p].push(i);
        }
    }
    for lines in &through {
        for &n in lines {
            for &t in lines {
                meets[n * words + t / 64] |= 1 << (t % 64);
            }
        }
    }
    let mut hist = vec![0u64; k.max(2) - 1];
    let mut on_line = vec![false; v];
    for blk in blocks {
        for &p in blk {
            on_line[p] = true;
        }
        for x in (0..v).filter(|&x| !on_line[x]) {
            for &y in blk {
                let m = &blocks[index.block(x, y)];
                for &w in blk {
                    if w == y {
                        continue;
                    }
                    let t = index.block(x, w);
                    let row = &meets[..];
                    for &z in blk {
                        if z == y || z == w {
                            continue;
                        }
                        let mut key = 0;
                        for &u in m {
                            if u == x || u == y {
                                continue;
                            }
                            let n = index.block(u, z);
                            if row[n * words + t / 64] >> (t % 64) & 1 == 0 {
                                key += 1;
                            }
                        }
                        hist[key] += 1;
                    }
                }
            }
        }
        for &p in blk {
            on_line[p] = false;
        }
    }
    Fingerprint::from_counts(hist.into_iter().enumerate())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fano() -> Design {
        let blocks = (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect();
        Design::new(7, 3, blocks).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let f: Fingerprint = "{1=37632, 2=492192, 3=1475136, 4=1278240}".parse().unwrap();
        assert_eq!(f.total(), 3_283_200);
        assert_eq!(f.to_string(), "{1=37632, 2=492192, 3=1475136, 4=1278240}");
        let g: Fingerprint = "\\{0=0, 2=5\\}".parse().unwrap();
        assert_eq!(g.to_string(), "{2=5}");
        assert_eq!("{}".parse::<Fingerprint>().unwrap(), Fingerprint::default());
        assert!("{1=2, 1=3}".parse::<Fingerprint>().is_err());
        assert!("{1:2}".parse::<Fingerprint>().is_err());
    }

    #[test]
    fn fano_census() {
        let d = fano();
        let f = fingerprint(&d).unwrap();
        assert_eq!(f.total(), Fingerprint::expected_total(7, 3, 7));
        assert!(f.counts().keys().all(|&k| k <= 1));
    }

    #[test]
    fn rejects_non_steiner() {
        let d = fano().without_block(0);
        assert!(matches!(fingerprint(&d), Err(Error::Unverified)));
        assert!(PairBlockIndex::new(&d).is_err());
    }
}
