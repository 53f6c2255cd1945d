//! Per-component field dumps: CSV (`i,j,k,value`) or a little-endian binary
//! blob with a fixed 48-byte header.
//!
//! Binary layout:
//!
//! | offset | size | content                  |
//! |--------|------|--------------------------|
//! | 0      | 4    | magic `ADIM`             |
//! | 4      | 4    | version (u32)            |
//! | 8      | 24   | I, J, K (u64 each)       |
//! | 32     | 4    | component tag (u32)      |
//! | 36     | 4    | reserved, zero           |
//! | 40     | 8    | time level (f64)         |
//!
//! followed by the lattice values as f64 with k varying fastest.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{AdiError, Result};
use crate::grid::{Component, FieldState, GridSpec};
use crate::lattice::Lattice;
use crate::real::Real;

pub const MAGIC: &[u8; 4] = b"ADIM";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotHeader {
    pub counts: [u64; 3],
    pub component: Component,
    pub time_level: f64,
}

pub fn write_csv<T: Real>(path: &Path, lattice: &Lattice<T>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "i,j,k,value")?;
    let s = lattice.spans();
    for a in s[0].range() {
        for b in s[1].range() {
            for c in s[2].range() {
                writeln!(w, "{a},{b},{c},{:.16e}", lattice.at(a, b, c).as_f64())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV dump of component `c` on `grid`. Every stored index must be
/// present exactly once.
pub fn read_csv<T: Real>(path: &Path, c: Component, grid: &GridSpec<T>) -> Result<Lattice<T>> {
    let spans = grid.spans(c);
    let mut out = Lattice::zeros(spans);
    let mut seen = vec![false; out.len()];
    let mut lines = BufReader::new(File::open(path)?).lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == "i,j,k,value" => {}
        _ => return Err(AdiError::Snapshot("missing `i,j,k,value` header".into())),
    }
    let dims = out.dims();
    for (no, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || AdiError::Snapshot(format!("line {}: cannot parse `{line}`", no + 2));
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(bad());
        }
        let idx: Vec<usize> = f[..3].iter().map(|s| s.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        let v: f64 = f[3].trim().parse().map_err(|_| bad())?;
        let (a, b, d) = (idx[0], idx[1], idx[2]);
        if !out.contains(a, b, d) {
            return Err(AdiError::IndexOutOfExtent { component: c, i: a, j: b, k: d });
        }
        out.set(a, b, d, T::lit(v));
        seen[(a * dims[1] + b) * dims[2] + d] = true;
    }
    if let Some(p) = seen.iter().position(|s| !s) {
        return Err(AdiError::Snapshot(format!("{c}: storage index {p} missing")));
    }
    Ok(out)
}

pub fn write_binary<T: Real>(path: &Path, lattice: &Lattice<T>, c: Component, grid: &GridSpec<T>, time_level: f64) -> Result<()> {
    if *lattice.spans() != grid.spans(c) {
        return Err(AdiError::ExtentMismatch(format!("{c} lattice does not match the grid")));
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    for n in grid.counts() {
        w.write_all(&(n as u64).to_le_bytes())?;
    }
    w.write_all(&c.tag().to_le_bytes())?;
    w.write_all(&0u32.to_le_bytes())?;
    w.write_all(&time_level.to_le_bytes())?;
    for v in lattice.as_slice() {
        w.write_all(&v.as_f64().to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_binary<T: Real>(path: &Path) -> Result<(SnapshotHeader, Lattice<T>)> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < HEADER_LEN {
        return Err(AdiError::Snapshot(format!("file shorter than the {HEADER_LEN}-byte header")));
    }
    if &bytes[..4] != MAGIC {
        return Err(AdiError::Snapshot("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let version = u32_at(4);
    if version != VERSION {
        return Err(AdiError::Snapshot(format!("unsupported version {version}")));
    }
    let counts = [u64_at(8), u64_at(16), u64_at(24)];
    let tag = u32_at(32);
    let component = Component::from_tag(tag).ok_or_else(|| AdiError::Snapshot(format!("unknown component tag {tag}")))?;
    let time_level = f64::from_le_bytes(bytes[40..48].try_into().expect("8 bytes"));
    let ucounts = counts.map(|n| n as usize);
    let spans = component.spans(ucounts);
    let n = spans.iter().map(|s| s.len).product::<usize>();
    let body = &bytes[HEADER_LEN..];
    if body.len() != 8 * n {
        return Err(AdiError::Snapshot(format!("expected {n} values, found {} bytes", body.len())));
    }
    let data = body
        .chunks_exact(8)
        .map(|ch| T::lit(f64::from_le_bytes(ch.try_into().expect("8 bytes"))))
        .collect();
    Ok((SnapshotHeader { counts, component, time_level }, Lattice::from_vec(spans, data)?))
}

/// Writes all six components into `dir` as `<stem>_<Comp>.csv` or `.bin`.
/// Returns the file names written.
pub fn dump_state<T: Real>(dir: &Path, stem: &str, state: &FieldState<T>, grid: &GridSpec<T>, binary: bool) -> Result<Vec<String>> {
    let mut names = Vec::new();
    for c in Component::ALL {
        let name = format!("{stem}_{c}.{}", if binary { "bin" } else { "csv" });
        let path = dir.join(&name);
        if binary {
            write_binary(&path, state.lattice(c), c, grid, state.time_level)?;
        } else {
            write_csv(&path, state.lattice(c))?;
        }
        names.push(name);
    }
    Ok(names)
}
