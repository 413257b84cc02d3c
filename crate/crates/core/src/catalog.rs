//! Plain-text persistence for [`MlcifCatalog`].
//!
//! ```text
//! # mlcif-catalog v1 n=10 r=3 entries=10
//! gen:1 rank=1 kind=-
//! gen:1,2;1,3;2,3 rank=2 kind=AHM3
//! ```

use crate::enumerator::{CatalogEntry, MlcifCatalog, Rank2Kind};
use crate::error::{Error, Result};
use crate::genfam::{parse_generator_list, GenFamily};
use crate::setfam::Params;
use crate::trace::TraceFamily;
use std::fmt::Write;

const HEADER: &str = "# mlcif-catalog v1";

impl MlcifCatalog {
    pub fn to_text(&self) -> String {
        let p = self.params();
        let mut out = format!("{HEADER} n={} r={} entries={}\n", p.n(), p.r(), self.len());
        for e in self.entries() {
            let kind = e.kind().map_or("-".to_string(), |k| k.to_string());
            writeln!(out, "{} rank={} kind={}", e.generators(), e.rank(), kind).expect("string write");
        }
        out
    }

    /// Parses and re-validates a saved catalog: every entry must be an MLCIF
    /// whose stored generators, rank and kind match what they generate.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty catalog".into()))?;
        let rest = header
            .strip_prefix(HEADER)
            .ok_or_else(|| Error::Parse(format!("bad catalog header `{header}`")))?;
        let field = |name: &str| -> Result<u32> {
            rest.split_whitespace()
                .find_map(|kv| kv.strip_prefix(name).and_then(|v| v.strip_prefix('=')))
                .ok_or_else(|| Error::Parse(format!("header lacks {name}")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad {name} in header")))
        };
        let params = Params::new(field("n")?, field("r")?)?;
        let expected = field("entries")? as usize;
        let mut entries = Vec::new();
        for line in lines {
            entries.push(parse_entry(params, line)?);
        }
        if entries.len() != expected {
            return Err(Error::InvalidInput(format!(
                "header promises {expected} entries, found {}",
                entries.len()
            )));
        }
        let catalog = MlcifCatalog::from_entries(params, entries);
        if catalog.len() != expected {
            return Err(Error::InvalidInput("duplicate catalog entries".into()));
        }
        Ok(catalog)
    }
}

fn parse_entry(params: Params, line: &str) -> Result<CatalogEntry> {
    let mut parts = line.split_whitespace();
    let gens_text = parts.next().ok_or_else(|| Error::Parse("empty entry".into()))?;
    let body = gens_text
        .strip_prefix("gen:")
        .ok_or_else(|| Error::Parse(format!("entry `{line}` lacks gen:")))?;
    let generators = GenFamily::new(params, parse_generator_list(body)?)?;
    let mut rank = None;
    let mut kind = None;
    for kv in parts {
        if let Some(v) = kv.strip_prefix("rank=") {
            rank = Some(v.parse::<u32>().map_err(|_| Error::Parse(format!("bad rank `{v}`")))?);
        } else if let Some(v) = kv.strip_prefix("kind=") {
            kind = Some(if v == "-" { None } else { Some(v.parse::<Rank2Kind>()?) });
        } else {
            return Err(Error::Parse(format!("unknown field `{kv}`")));
        }
    }
    let rank = rank.ok_or_else(|| Error::Parse(format!("entry `{line}` lacks rank")))?;
    let kind = kind.ok_or_else(|| Error::Parse(format!("entry `{line}` lacks kind")))?;
    let entry = if params.n() < 2 * params.r() {
        if generators.generators() != [0] {
            return Err(Error::NotMlcif(format!(
                "for n < 2r only gen:{{}} is an MLCIF, got {generators}"
            )));
        }
        CatalogEntry::complete(params)?
    } else {
        let trace = TraceFamily::from_generators(params, generators.generators())?;
        if !trace.is_mlcif() {
            return Err(Error::NotMlcif(generators.to_string()));
        }
        let labels = crate::enumerator::named_labels(params);
        let entry = CatalogEntry::from_trace(trace, &labels)?;
        if entry.generators() != &generators {
            return Err(Error::InvalidInput(format!(
                "{generators} is not canonical (expected {})",
                entry.generators()
            )));
        }
        entry
    };
    if entry.rank().value() != rank || entry.kind() != kind {
        return Err(Error::InvalidInput(format!(
            "rank or kind of {generators} does not match"
        )));
    }
    Ok(entry)
}
