//! Resumable search state on disk.
//!
//! The checkpoint file holds one completed two-level prefix per line: the
//! sorted points of the first chosen base block followed by those of the
//! second, space-separated. Systems found under completed prefixes are kept
//! in a sidecar file `<checkpoint>.found`, one block list per line, so a
//! resumed run can report them without revisiting the prefix.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::action::PointSpace;
use crate::error::{Error, Result};
use crate::notation::{emit_blocks, parse_blocks, ParseMode};

pub struct Checkpoint {
    path: PathBuf,
    done: HashSet<Vec<u16>>,
    found: Vec<Vec<Vec<usize>>>,
    writer: Mutex<(File, File)>,
}

pub fn found_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".found");
    PathBuf::from(name)
}

impl Checkpoint {
    /// Opens or creates the checkpoint and its sidecar.
    pub fn open(path: &Path, space: &PointSpace) -> Result<Checkpoint> {
        let done = read_prefixes(path)?;
        let sidecar = found_path(path);
        let mut found = Vec::new();
        if sidecar.exists() {
            for (n, line) in complete_lines(&sidecar)?.iter().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let parsed = parse_blocks(line, space, ParseMode::Strict, None)
                    .map_err(|e| Error::Checkpoint(format!("{}:{}: {e}", sidecar.display(), n + 1)))?;
                found.push(parsed.blocks);
            }
        }
        for p in [path, sidecar.as_path()] {
            drop_torn_line(p)?;
        }
        let append = |p: &Path| OpenOptions::new().create(true).append(true).open(p);
        let writer = Mutex::new((append(path)?, append(&sidecar)?));
        Ok(Checkpoint { path: path.to_path_buf(), done, found, writer })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn is_done(&self, prefix: &[u16]) -> bool {
        self.done.contains(prefix)
    }

    pub fn completed(&self) -> usize {
        self.done.len()
    }

    /// Systems recorded by earlier runs.
    pub fn found(&self) -> &[Vec<Vec<usize>>] {
        &self.found
    }

    /// Records the systems found under `prefix`, then the prefix itself.
    pub fn complete(&self, prefix: &[u16], systems: &[Vec<Vec<usize>>], space: &PointSpace) -> Result<()> {
        let mut w = self.writer.lock().expect("checkpoint writer poisoned");
        for s in systems {
            writeln!(w.1, "{}", emit_blocks(s, space))?;
        }
        w.1.flush()?;
        let line: Vec<String> = prefix.iter().map(u16::to_string).collect();
        writeln!(w.0, "{}", line.join(" "))?;
        w.0.flush()?;
        Ok(())
    }
}

pub fn read_prefixes(path: &Path) -> Result<HashSet<Vec<u16>>> {
    let mut done = HashSet::new();
    if !path.exists() {
        return Ok(done);
    }
    for (n, line) in complete_lines(path)?.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let prefix = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<Vec<u16>, _>>()
            .map_err(|e| Error::Checkpoint(format!("{}:{}: {e}", path.display(), n + 1)))?;
        done.insert(prefix);
    }
    Ok(done)
}

/// Newline-terminated lines only; a torn final line from a killed run is dropped.
fn complete_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines: Vec<String> = text.split('\n').map(str::to_string).collect();
    lines.pop();
    Ok(lines)
}

fn drop_torn_line(path: &Path) -> Result<()> {
    if !path.exists() {
        return Ok(());
    }
    let text = std::fs::read_to_string(path)?;
    if !text.is_empty() && !text.ends_with('\n') {
        let keep = text.rfind('\n').map_or(0, |i| i + 1);
        std::fs::write(path, &text[..keep])?;
    }
    Ok(())
}
