//! Report rendering: pretty JSON and the per-class CSV table.

use crate::Failure;
use mlcif_core::count::serialize_count;
use mlcif_core::{ClassificationReport, Count, MlcifCatalog, Mode};
use serde::Serialize;

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
pub struct HitRow {
    pub n: u32,
    pub r: u32,
    pub family: String,
    pub x: Vec<u32>,
    pub mode: Mode,
    #[serde(serialize_with = "serialize_count")]
    pub hit: Count,
}

#[derive(Serialize)]
pub struct CatalogRow {
    pub label: String,
    pub generators: String,
    pub rank: u32,
    pub kind: Option<String>,
    #[serde(serialize_with = "serialize_count")]
    pub size: Count,
}

pub fn catalog_rows(catalog: &MlcifCatalog) -> Vec<CatalogRow> {
    catalog
        .entries()
        .iter()
        .map(|e| CatalogRow {
            label: e.label().to_string(),
            generators: e.generators().to_string(),
            rank: e.rank().value(),
            kind: e.kind().map(|k| k.to_string()),
            size: e.size(),
        })
        .collect()
}

/// One row per (class, entry): `xclass, entry-id, hit, is-optimal, predicted, agrees`.
pub fn classification_csv(reports: &[ClassificationReport]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(["xclass", "entry-id", "hit", "is-optimal", "predicted", "agrees"])
        .map_err(io)?;
    for rep in reports {
        for h in &rep.hits {
            w.write_record([
                rep.xclass.as_str(),
                h.entry.as_str(),
                &h.hit.to_string(),
                &rep.is_optimal(&h.entry).to_string(),
                &rep.predicted.contains(&h.entry).to_string(),
                &rep.agrees.to_string(),
            ])
            .map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
}
