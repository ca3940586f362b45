//! Finite groups as 0-based Cayley tables.
//!
//! Every group used by the crate is materialized as a full multiplication
//! table with the identity at index 0. Tables are validated eagerly (Latin
//! property, two-sided identity, associativity over all triples) so the rest
//! of the crate can index them without further checks.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TableDiagnostic};

/// Largest supported group order.
pub const MAX_ORDER: usize = 256;

/// How the pairs `(a, b)` of `Z_m ⋊ Z_c` are numbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum PairNumbering {
    /// `n ≡ a (mod m)`, `n ≡ b (mod c)` when `gcd(m, c) = 1`; row-major otherwise.
    #[default]
    Residue,
    /// `n = a·c + b`.
    RowMajor,
}

/// Recipe for one of the built-in group families.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSpec {
    Cyclic(usize),
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
    /// `Z_m ⋊_t Z_c` with `(a,b)(x,y) = (a + t^b x mod m, b + y mod c)`.
    SemidirectCyclic { m: usize, c: usize, t: usize, numbering: PairNumbering },
    /// Upper unitriangular 3×3 matrices over `Z_p`.
    Heisenberg(usize),
    SpecialLinear25,
    Imported(PathBuf),
}

impl GroupSpec {
    pub fn semidirect(m: usize, c: usize, t: usize) -> Self {
        GroupSpec::SemidirectCyclic { m, c, t, numbering: PairNumbering::Residue }
    }

    pub fn direct(a: GroupSpec, b: GroupSpec) -> Self {
        GroupSpec::DirectProduct(Box::new(a), Box::new(b))
    }

    /// Group order without building the table (`None` for imported tables).
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic(n) => Some(*n),
            GroupSpec::DirectProduct(a, b) => Some(a.order()? * b.order()?),
            GroupSpec::SemidirectCyclic { m, c, .. } => Some(m * c),
            GroupSpec::Heisenberg(p) => Some(p * p * p),
            GroupSpec::SpecialLinear25 => Some(120),
            GroupSpec::Imported(_) => None,
        }
    }

    /// Decodes a semidirect element index into its `(a, b)` pair.
    pub fn semidirect_pair(&self, index: usize) -> Option<(usize, usize)> {
        match self {
            GroupSpec::SemidirectCyclic { m, c, numbering, .. } => {
                if index >= m * c {
                    return None;
                }
                Some(match pair_layout(*m, *c, *numbering) {
                    PairNumbering::Residue => (index % m, index % c),
                    PairNumbering::RowMajor => (index / c, index % c),
                })
            }
            _ => None,
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            GroupSpec::Cyclic(0) => Err(Error::GroupSpec("cyclic group of order 0".into())),
            GroupSpec::SemidirectCyclic { m, c, t, .. } => {
                if *m < 2 || *c < 1 {
                    return Err(Error::GroupSpec(format!("semidirect({m},{c},{t}): bad moduli")));
                }
                if *t < 1 || t >= m {
                    return Err(Error::GroupSpec(format!(
                        "semidirect({m},{c},{t}): multiplier must satisfy 1 <= t < m"
                    )));
                }
                if pow_mod(*t, *c, *m) != 1 % m {
                    return Err(Error::GroupSpec(format!(
                        "semidirect({m},{c},{t}): {t}^{c} = {} (mod {m}), not 1",
                        pow_mod(*t, *c, *m)
                    )));
                }
                Ok(())
            }
            GroupSpec::Heisenberg(p) if !is_prime(*p) => {
                Err(Error::GroupSpec(format!("heisenberg({p}): {p} is not prime")))
            }
            GroupSpec::DirectProduct(a, b) => {
                a.check()?;
                b.check()
            }
            _ => Ok(()),
        }
    }
}

fn pair_layout(m: usize, c: usize, numbering: PairNumbering) -> PairNumbering {
    match numbering {
        PairNumbering::Residue if gcd(m, c) == 1 => PairNumbering::Residue,
        _ => PairNumbering::RowMajor,
    }
}

fn pair_index(m: usize, c: usize, layout: PairNumbering, a: usize, b: usize) -> usize {
    match layout {
        // CRT: the unique n < mc with n ≡ a (mod m), n ≡ b (mod c).
        PairNumbering::Residue => (0..c).map(|j| a + j * m).find(|n| n % c == b).unwrap(),
        PairNumbering::RowMajor => a * c + b,
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupSpec::DirectProduct(a, b) => write!(f, "direct({a},{b})"),
            GroupSpec::SemidirectCyclic { m, c, t, numbering } => match numbering {
                PairNumbering::Residue => write!(f, "semidirect({m},{c},{t})"),
                PairNumbering::RowMajor => write!(f, "semidirect({m},{c},{t},row-major)"),
            },
            GroupSpec::Heisenberg(p) => write!(f, "heisenberg({p})"),
            GroupSpec::SpecialLinear25 => write!(f, "sl25"),
            GroupSpec::Imported(path) => write!(f, "table({})", path.display()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = SpecParser { src: s, pos: 0 };
        let spec = parser.spec()?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(Error::parse(parser.pos, "trailing input after group spec"));
        }
        Ok(spec)
    }
}

struct SpecParser<'a> {
    src: &'a str,
    pos: usize,
}

impl SpecParser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn number(&mut self) -> Result<usize> {
        let at = self.pos;
        let w = self.word();
        w.parse().map_err(|_| Error::parse(at, format!("expected a number, found `{w}`")))
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let at = self.pos;
        let name = self.word().to_ascii_lowercase();
        match name.as_str() {
            "sl25" => Ok(GroupSpec::SpecialLinear25),
            "cyclic" | "c" | "z" => {
                self.eat('(')?;
                let n = self.number()?;
                self.eat(')')?;
                Ok(GroupSpec::Cyclic(n))
            }
            "heisenberg" => {
                self.eat('(')?;
                let p = self.number()?;
                self.eat(')')?;
                Ok(GroupSpec::Heisenberg(p))
            }
            "direct" => {
                self.eat('(')?;
                let a = self.spec()?;
                self.eat(',')?;
                let b = self.spec()?;
                self.eat(')')?;
                Ok(GroupSpec::direct(a, b))
            }
            "semidirect" => {
                self.eat('(')?;
                let m = self.number()?;
                self.eat(',')?;
                let c = self.number()?;
                self.eat(',')?;
                let t = self.number()?;
                self.skip_ws();
                let numbering = if self.src[self.pos..].starts_with(',') {
                    self.eat(',')?;
                    let at = self.pos;
                    match self.word() {
                        "row-major" => PairNumbering::RowMajor,
                        "residue" | "crt" => PairNumbering::Residue,
                        other => return Err(Error::parse(at, format!("unknown numbering `{other}`"))),
                    }
                } else {
                    PairNumbering::Residue
                };
                self.eat(')')?;
                Ok(GroupSpec::SemidirectCyclic { m, c, t, numbering })
            }
            "table" => {
                self.eat('(')?;
                let start = self.pos;
                let end = self.src[start..]
                    .rfind(')')
                    .map(|i| start + i)
                    .ok_or_else(|| Error::parse(start, "unterminated table(...)"))?;
                self.pos = end + 1;
                Ok(GroupSpec::Imported(PathBuf::from(self.src[start..end].trim())))
            }
            _ => Err(Error::parse(at, format!("unknown group family `{name}`"))),
        }
    }
}

/// A validated finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
    origin: Option<GroupSpec>,
}

impl GroupTable {
    /// Builds and validates a group from a spec.
    pub fn build(spec: &GroupSpec) -> Result<GroupTable> {
        spec.check()?;
        if let Some(n) = spec.order() {
            if n > MAX_ORDER {
                return Err(TableDiagnostic::TooLarge { order: n, max: MAX_ORDER }.into());
            }
        }
        let rows = match spec {
            GroupSpec::Cyclic(n) => {
                let n = *n;
                (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
            }
            GroupSpec::DirectProduct(a, b) => {
                let a = GroupTable::build(a)?;
                let b = GroupTable::build(b)?;
                let nb = b.order();
                let n = a.order() * nb;
                let mut rows = vec![vec![0; n]; n];
                for (g, row) in rows.iter_mut().enumerate() {
                    for (h, cell) in row.iter_mut().enumerate() {
                        *cell = a.mul(g / nb, h / nb) * nb + b.mul(g % nb, h % nb);
                    }
                }
                rows
            }
            GroupSpec::SemidirectCyclic { m, c, t, numbering } => {
                let (m, c, t) = (*m, *c, *t);
                let layout = pair_layout(m, c, *numbering);
                let n = m * c;
                let mut decode = vec![(0, 0); n];
                for a in 0..m {
                    for b in 0..c {
                        decode[pair_index(m, c, layout, a, b)] = (a, b);
                    }
                }
                let mut rows = vec![vec![0; n]; n];
                for (g, row) in rows.iter_mut().enumerate() {
                    let (a, b) = decode[g];
                    let tb = pow_mod(t, b, m);
                    for (h, cell) in row.iter_mut().enumerate() {
                        let (x, y) = decode[h];
                        *cell = pair_index(m, c, layout, (a + tb * x) % m, (b + y) % c);
                    }
                }
                rows
            }
            GroupSpec::Heisenberg(p) => {
                let p = *p;
                let n = p * p * p;
                let dec = |i: usize| (i / (p * p), (i / p) % p, i % p);
                let mut rows = vec![vec![0; n]; n];
                for (g, row) in rows.iter_mut().enumerate() {
                    let (a, b, c) = dec(g);
                    for (h, cell) in row.iter_mut().enumerate() {
                        let (x, y, z) = dec(h);
                        *cell = ((a + x) % p) * p * p + ((b + y) % p) * p + (c + z + a * y) % p;
                    }
                }
                rows
            }
            GroupSpec::SpecialLinear25 => {
                let mats = sl25_elements();
                let index = |m: [usize; 4]| mats.iter().position(|&x| x == m).unwrap();
                mats.iter()
                    .map(|&g| mats.iter().map(|&h| index(mat_mul5(g, h))).collect())
                    .collect()
            }
            GroupSpec::Imported(path) => {
                let mut table = GroupTable::read_table_file(path)?;
                table.origin = Some(spec.clone());
                return Ok(table);
            }
        };
        let mut table = GroupTable::from_rows(&rows)?;
        table.origin = Some(spec.clone());
        Ok(table)
    }

    /// Validates a raw table; the diagnostic names the first failing axiom.
    pub fn validate(raw: &[Vec<i64>]) -> Result<GroupTable, TableDiagnostic> {
        let n = raw.len();
        if n == 0 {
            return Err(TableDiagnostic::Empty);
        }
        if n > MAX_ORDER {
            return Err(TableDiagnostic::TooLarge { order: n, max: MAX_ORDER });
        }
        let mut table = Vec::with_capacity(n * n);
        for (r, row) in raw.iter().enumerate() {
            if row.len() != n {
                return Err(TableDiagnostic::NotSquare { row: r, len: row.len(), order: n });
            }
            for (c, &x) in row.iter().enumerate() {
                if x < 0 || x as usize >= n {
                    return Err(TableDiagnostic::OutOfRange { row: r, col: c, value: x });
                }
                table.push(x as u16);
            }
        }
        let at = |g: usize, h: usize| table[g * n + h] as usize;
        if let Some(x) = (0..n).find(|&x| at(0, x) != x || at(x, 0) != x) {
            return Err(TableDiagnostic::IdentityNotZero { witness: x });
        }
        let mut seen = vec![usize::MAX; n];
        for r in 0..n {
            for c in 0..n {
                let x = at(r, c);
                if seen[x] == r {
                    return Err(TableDiagnostic::RowNotLatin { row: r, repeated: x });
                }
                seen[x] = r;
            }
        }
        seen.fill(usize::MAX);
        for c in 0..n {
            for r in 0..n {
                let x = at(r, c);
                if seen[x] == c {
                    return Err(TableDiagnostic::ColumnNotLatin { col: c, repeated: x });
                }
                seen[x] = c;
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = at(x, y);
                for z in 0..n {
                    if at(xy, z) != at(x, at(y, z)) {
                        return Err(TableDiagnostic::NotAssociative { x, y, z });
                    }
                }
            }
        }
        let inverses = (0..n)
            .map(|x| (0..n).find(|&y| at(x, y) == 0).unwrap() as u16)
            .collect();
        Ok(GroupTable { order: n, table, inverses, origin: None })
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<GroupTable, TableDiagnostic> {
        let raw: Vec<Vec<i64>> =
            rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        GroupTable::validate(&raw)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h] as usize
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g] as usize
    }

    pub fn row(&self, g: usize) -> &[u16] {
        &self.table[g * self.order..(g + 1) * self.order]
    }

    /// The spec this table was built from, if any.
    pub fn origin(&self) -> Option<&GroupSpec> {
        self.origin.as_ref()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// Serializes to the Cayley-table text format: `n`, then `n` rows.
    pub fn to_table_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for g in 0..self.order {
            let row: Vec<String> = self.row(g).iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_table_text(text: &str) -> Result<GroupTable> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| Error::parse(0, "missing order line"))?
            .parse()
            .map_err(|_| Error::parse(0, "order is not a number"))?;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty()).skip(1);
        let mut raw = Vec::with_capacity(n);
        for r in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::parse(r + 1, format!("expected {n} rows, found {r}")))?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(r + 1, format!("row {r}: {e}")))?;
            raw.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::parse(n + 1, "extra rows after table"));
        }
        Ok(GroupTable::validate(&raw)?)
    }

    pub fn read_table_file(path: &Path) -> Result<GroupTable> {
        let text = fs::read_to_string(path)?;
        let mut table = GroupTable::from_table_text(&text)?;
        table.origin = Some(GroupSpec::Imported(path.to_path_buf()));
        Ok(table)
    }

    pub fn write_table_file(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_table_text())?;
        Ok(())
    }
}

fn sl25_elements() -> Vec<[usize; 4]> {
    let mut mats = Vec::with_capacity(120);
    for a in 0..5 {
        for b in 0..5 {
            for c in 0..5 {
                for d in 0..5 {
                    if (a * d + 5 * 5 - b * c) % 5 == 1 {
                        mats.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let id = [1, 0, 0, 1];
    mats.retain(|&m| m != id);
    mats.insert(0, id);
    mats
}

fn mat_mul5(g: [usize; 4], h: [usize; 4]) -> [usize; 4] {
    [
        (g[0] * h[0] + g[1] * h[2]) % 5,
        (g[0] * h[1] + g[1] * h[3]) % 5,
        (g[2] * h[0] + g[3] * h[2]) % 5,
        (g[2] * h[1] + g[3] * h[3]) % 5,
    ]
}

pub(crate) fn pow_mod(base: usize, exp: usize, m: usize) -> usize {
    let mut r = 1 % m;
    let mut b = base % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}
