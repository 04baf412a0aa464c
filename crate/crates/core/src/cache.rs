//! On-disk cache of `F_1..F_D`.
//!
//! ```text
//! DESSIN-F v1 dmax=<D>
//! <d> <k> <l> <profile> <num>/<den>
//! ...
//! ```
//!
//! Terms follow the canonical key order, which sorts by degree first, so the
//! body for `D` extends the body for any smaller `D` byte for byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::evolution::EngineState;
use crate::series::{parse_term, GradedSeries};

pub const CACHE_TAG: &str = "DESSIN-F v1";

pub fn render(state: &EngineState) -> String {
    let mut out = format!("{CACHE_TAG} dmax={}\n", state.dmax());
    for piece in state.pieces() {
        out.push_str(&piece.render());
    }
    out
}

pub fn parse(text: &str) -> Result<EngineState> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    let dmax: u32 = header
        .strip_prefix(CACHE_TAG)
        .and_then(|rest| rest.trim().strip_prefix("dmax="))
        .and_then(|d| d.parse().ok())
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Parse(format!("bad cache header `{header}`")))?;

    let mut pieces: Vec<GradedSeries> = (1..=dmax).map(GradedSeries::zero).collect();
    let mut last = None;
    for (n, line) in lines.enumerate() {
        let (key, c) =
            parse_term(line).map_err(|e| Error::Parse(format!("cache line {}: {e}", n + 2)))?;
        let d = key.weight();
        if d == 0 || d > dmax {
            return Err(Error::Parse(format!(
                "cache line {}: degree {d} outside 1..={dmax}",
                n + 2
            )));
        }
        if last.as_ref().is_some_and(|prev| *prev >= key) {
            return Err(Error::Parse(format!(
                "cache line {}: terms out of order",
                n + 2
            )));
        }
        pieces[d as usize - 1].add_term(key.clone(), c);
        last = Some(key);
    }
    EngineState::from_pieces(pieces).map_err(|e| Error::Parse(format!("cache content: {e}")))
}

/// Reads a cache; `Ok(None)` when the file does not exist.
pub fn load(path: &Path) -> Result<Option<EngineState>> {
    match fs::read_to_string(path) {
        Ok(text) => parse(&text).map(Some),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Writes through a sibling temporary file and renames it into place.
pub fn store(path: &Path, state: &EngineState) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(render(state).as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
