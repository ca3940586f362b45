//! Block lists in the printed notation: `[[0, 1, 3, 13, 28, 0'], [0, 18, 11', 28', 33', 39']]`.
//!
//! Grammar:
//!
//! ```text
//! LIST  := '[' BLOCK (',' BLOCK)* ']' | '[' ']' | BLOCK
//! BLOCK := '[' ITEM (',' ITEM)* ']'
//! ITEM  := INT PRIME* | '∞' | 'inf' | '\infty'
//! ```
//!
//! Whitespace and `$` are ignored everywhere. Lenient mode also drops
//! typesetting leftovers such as `\newline` and `\quad` and reports wrong
//! block sizes as warnings instead of errors.

use serde::{Deserialize, Serialize};

use crate::action::{PointLabel, PointSpace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ParseMode {
    #[default]
    Strict,
    Lenient,
}

/// Blocks resolved to global point indices, each sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedBlocks {
    pub blocks: Vec<Vec<usize>>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Comma,
    Item(PointLabel),
}

const LENIENT_NOISE: [&str; 7] = ["\\newline", "\\quad", "\\qquad", "\\\\", "\\,", "\\;", "\\!"];

fn tokenize(text: &str, mode: ParseMode) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() || c == '$' {
            i += c.len_utf8();
            continue;
        }
        if mode == ParseMode::Lenient {
            for noise in LENIENT_NOISE {
                if rest.starts_with(noise) {
                    i += noise.len();
                    continue 'outer;
                }
            }
        }
        match c {
            '[' => out.push((i, Tok::Open)),
            ']' => out.push((i, Tok::Close)),
            ',' => out.push((i, Tok::Comma)),
            '∞' => out.push((i, Tok::Item(PointLabel::Infinity))),
            '0'..='9' => {
                let start = i;
                while i < text.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let index: usize = text[start..i]
                    .parse()
                    .map_err(|_| Error::parse(start, "integer label too large"))?;
                let mut primes = 0;
                loop {
                    let rest = &text[i..];
                    if rest.starts_with('\'') {
                        i += 1;
                    } else if mode == ParseMode::Lenient && rest.starts_with('’') {
                        i += '’'.len_utf8();
                    } else {
                        break;
                    }
                    primes += 1;
                }
                out.push((start, Tok::Item(PointLabel::Orbit { primes, index })));
                continue;
            }
            _ => {
                if let Some(word) = ["\\infty", "inf"].into_iter().find(|w| rest.starts_with(w)) {
                    out.push((i, Tok::Item(PointLabel::Infinity)));
                    i += word.len();
                    continue;
                }
                return Err(Error::parse(i, format!("unexpected character `{c}`")));
            }
        }
        i += c.len_utf8();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.offset(), format!("expected {what}")))
        }
    }

    fn block(&mut self) -> Result<Vec<(usize, PointLabel)>> {
        self.expect(Tok::Open, "`[`")?;
        let mut items = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Item(label)) => {
                    items.push((self.offset(), label));
                    self.pos += 1;
                }
                _ => return Err(Error::parse(self.offset(), "expected a point label")),
            }
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::Close) => {
                    self.pos += 1;
                    return Ok(items);
                }
                _ => return Err(Error::parse(self.offset(), "expected `,` or `]`")),
            }
        }
    }

    fn list(&mut self) -> Result<Vec<Vec<(usize, PointLabel)>>> {
        let blocks = match (self.peek(), self.toks.get(self.pos + 1).map(|t| t.1)) {
            (Some(Tok::Open), Some(Tok::Item(_))) => vec![self.block()?],
            (Some(Tok::Open), Some(Tok::Close)) => {
                self.pos += 2;
                Vec::new()
            }
            (Some(Tok::Open), _) => {
                self.pos += 1;
                let mut blocks = vec![self.block()?];
                while self.peek() == Some(Tok::Comma) {
                    self.pos += 1;
                    blocks.push(self.block()?);
                }
                self.expect(Tok::Close, "`,` or `]`")?;
                blocks
            }
            _ => return Err(Error::parse(self.offset(), "expected `[`")),
        };
        if self.pos != self.toks.len() {
            return Err(Error::parse(self.offset(), "trailing input after block list"));
        }
        Ok(blocks)
    }
}

fn parse_raw(text: &str, mode: ParseMode) -> Result<Vec<Vec<(usize, PointLabel)>>> {
    let toks = tokenize(text, mode)?;
    Parser { toks, pos: 0, end: text.len() }.list()
}

/// Parses labels without resolving them against a point space.
pub fn parse_labels(text: &str, mode: ParseMode) -> Result<Vec<Vec<PointLabel>>> {
    Ok(parse_raw(text, mode)?
        .into_iter()
        .map(|b| b.into_iter().map(|(_, l)| l).collect())
        .collect())
}

/// Maps a label block to sorted global indices, rejecting repeated points.
pub fn resolve_block(labels: &[PointLabel], space: &PointSpace) -> Result<Vec<usize>> {
    let mut block = Vec::with_capacity(labels.len());
    for &l in labels {
        block.push(space.point(l)?);
    }
    block.sort_unstable();
    if let Some(w) = block.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidDesign(format!(
            "duplicate point {} in block",
            space.label(w[0]).unwrap()
        )));
    }
    Ok(block)
}

/// Parses a block list and resolves every label in `space`.
///
/// With `k` set, blocks of another size are rejected in strict mode and
/// reported in `warnings` in lenient mode.
pub fn parse_blocks(
    text: &str,
    space: &PointSpace,
    mode: ParseMode,
    k: Option<usize>,
) -> Result<ParsedBlocks> {
    let raw = parse_raw(text, mode)?;
    let mut blocks = Vec::with_capacity(raw.len());
    let mut warnings = Vec::new();
    for (bi, items) in raw.into_iter().enumerate() {
        let mut block = Vec::with_capacity(items.len());
        for (offset, label) in items {
            let p = space.point(label).map_err(|e| match e {
                Error::Scenario(m) => Error::parse(offset, format!("label {label}: {m}")),
                other => other,
            })?;
            if block.contains(&p) {
                return Err(Error::parse(offset, format!("duplicate point {label} in block {bi}")));
            }
            block.push(p);
        }
        block.sort_unstable();
        if let Some(k) = k.filter(|&k| k != block.len()) {
            let msg = format!("block {bi} has {} points, expected {k}", block.len());
            match mode {
                ParseMode::Strict => return Err(Error::parse(0, msg)),
                ParseMode::Lenient => warnings.push(msg),
            }
        }
        blocks.push(block);
    }
    Ok(ParsedBlocks { blocks, warnings })
}

/// `[0, 5, 0', ∞]`, points in global order.
pub fn emit_block(block: &[usize], space: &PointSpace) -> String {
    let mut pts = block.to_vec();
    pts.sort_unstable();
    let items: Vec<String> = pts
        .iter()
        .map(|&p| space.label(p).map_or_else(|_| format!("?{p}"), |l| l.to_string()))
        .collect();
    format!("[{}]", items.join(", "))
}

/// Block list in canonical text; block order is preserved.
pub fn emit_blocks(blocks: &[Vec<usize>], space: &PointSpace) -> String {
    let items: Vec<String> = blocks.iter().map(|b| emit_block(b, space)).collect();
    format!("[{}]", items.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::Orbit;

    fn two_orbit(n: usize) -> PointSpace {
        PointSpace::new(vec![Orbit::Cyclic { size: n }, Orbit::Cyclic { size: n }]).unwrap()
    }

    fn four_orbit() -> PointSpace {
        PointSpace::new(vec![
            Orbit::Regular { size: 57 },
            Orbit::Quotient { size: 19 },
            Orbit::Quotient { size: 19 },
            Orbit::Fixed,
        ])
        .unwrap()
    }

    #[test]
    fn mills_base_blocks() {
        let space = two_orbit(48);
        let p = parse_blocks(
            "[[0, 1, 3, 13, 28, 0'], [0, 18, 11', 28', 33', 39']]",
            &space,
            ParseMode::Strict,
            Some(6),
        )
        .unwrap();
        assert_eq!(p.blocks, vec![vec![0, 1, 3, 13, 28, 48], vec![0, 18, 59, 76, 81, 87]]);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn single_block_with_infinity() {
        let space = PointSpace::new(vec![Orbit::Regular { size: 155 }, Orbit::Fixed]).unwrap();
        for text in ["[0, 15, 21, 37, 73, ∞]", "[0, 15, 21, 37, 73, $\\infty$]", "[0,15,21,37,73,inf]"] {
            let p = parse_blocks(text, &space, ParseMode::Strict, Some(6)).unwrap();
            assert_eq!(p.blocks, vec![vec![0, 15, 21, 37, 73, 155]]);
        }
    }

    #[test]
    fn prime_depth_error() {
        let err = parse_blocks("[0, 3''']", &four_orbit(), ParseMode::Strict, None).unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 4, .. }), "{err}");
        assert!(err.to_string().contains("prime depth 3"));
    }

    #[test]
    fn rejects_bad_input() {
        let space = two_orbit(48);
        for bad in ["[0, 48]", "[0, 0]", "[[0, 1], [2, 3]", "[0 1]", "[0, x]", "[0, ∞]", "[[0, 1]] 7"] {
            assert!(parse_blocks(bad, &space, ParseMode::Strict, None).is_err(), "{bad}");
        }
    }

    #[test]
    fn block_size_strict_and_lenient() {
        let space = two_orbit(48);
        let text = "[[0, 1, 2], [0, 5]]";
        assert!(parse_blocks(text, &space, ParseMode::Strict, Some(3)).is_err());
        let p = parse_blocks(text, &space, ParseMode::Lenient, Some(3)).unwrap();
        assert_eq!(p.blocks.len(), 2);
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn lenient_strips_typesetting() {
        let space = two_orbit(48);
        let text = "[[0, 1, 2],\\newline  [0, 5’, 7]]";
        assert!(parse_blocks(text, &space, ParseMode::Strict, None).is_err());
        let p = parse_blocks(text, &space, ParseMode::Lenient, None).unwrap();
        assert_eq!(p.blocks, vec![vec![0, 1, 2], vec![0, 7, 53]]);
    }

    #[test]
    fn emit_rules() {
        let space = PointSpace::new(vec![Orbit::Regular { size: 10 }, Orbit::Fixed]).unwrap();
        assert_eq!(emit_block(&[10, 0], &space), "[0, ∞]");
        assert_eq!(emit_blocks(&[], &space), "[]");
        assert_eq!(parse_blocks("[]", &space, ParseMode::Strict, None).unwrap().blocks.len(), 0);
        let space = four_orbit();
        let blocks = vec![vec![0, 1, 2, 57, 76, 95], vec![3, 7, 31, 51, 65]];
        let text = emit_blocks(&blocks, &space);
        assert_eq!(text, "[[0, 1, 2, 0', 0'', ∞], [3, 7, 31, 51, 8']]");
        assert_eq!(parse_blocks(&text, &space, ParseMode::Strict, None).unwrap().blocks, blocks);
    }
}
