//! Which MLCIFs hit a given set most often.

use crate::count::{binomial, serialize_count, Count};
use crate::enumerator::MlcifCatalog;
use crate::error::{Error, Result};
use crate::genfam::FamilySpec;
use crate::setfam::{hit_brute, Params};
use crate::xclass::{xclasses, XClass};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// How hitting numbers are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Materialize every family and count members meeting a representative.
    Brute,
    /// Closed-form counts over `[2r]`-traces.
    Trace,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Brute => "brute",
            Mode::Trace => "trace",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Mode::Brute),
            "trace" => Ok(Mode::Trace),
            _ => Err(Error::Parse(format!("unknown mode `{s}` (brute | trace)"))),
        }
    }
}

/// Hitting number of one catalog entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryHit {
    pub entry: String,
    #[serde(serialize_with = "serialize_count")]
    pub hit: Count,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub n: u32,
    pub r: u32,
    pub xclass: String,
    /// The representative set used for this class.
    pub x: Vec<u32>,
    pub hits: Vec<EntryHit>,
    pub optimal: Vec<String>,
    pub predicted: Vec<String>,
    pub agrees: bool,
    #[serde(skip)]
    pub optimal_indices: Vec<usize>,
}

impl ClassificationReport {
    pub fn max_hit(&self) -> &Count {
        &self.hits[self.optimal_indices[0]].hit
    }

    pub fn is_optimal(&self, label: &str) -> bool {
        self.optimal.iter().any(|l| l == label)
    }

    pub fn hit_of(&self, label: &str) -> Option<&Count> {
        self.hits.iter().find(|h| h.entry == label).map(|h| &h.hit)
    }
}

/// The best MLCIFs other than the star.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonstarReport {
    pub n: u32,
    pub r: u32,
    pub xclass: String,
    pub x: Vec<u32>,
    pub hits: Vec<EntryHit>,
    pub optimal: Vec<String>,
}

/// The predicted optimal set for a class.
///
/// For `r >= 3` this is the large-`n` theorem: with `1 ∉ X`,
/// (a) `X = {2}` gives `AHM_3`;
/// (b) `|X| = 2` meeting `{2,3}` gives `AHM_3`, plus `AHM_4` when `4 ∈ X`;
/// (c) `|X| = 3` containing `{2,3}` gives `AHM_3`, plus `AHM_4` when `X = {2,3,4}`;
/// (d) other `X ⊆ [2, r+1]` give `AHM_m` with `m = max X`;
/// everything else, and every `X ∋ 1`, gives the star alone.
/// For `r = 2` the known case list is used and for `r = 1` the star.
pub fn predicted_optimal(params: Params, xc: &XClass) -> Result<Vec<FamilySpec>> {
    xc.require_nonempty()?;
    let star = || Ok(vec![FamilySpec::star(params)]);
    if xc.contains_one() || params.r() == 1 {
        return star();
    }
    let x = xc.representative();
    let size = x.len();
    let has = |e: u32| x.contains(&e);
    let ahm = |t: u32| FamilySpec::ahm(t, params);
    if params.r() == 2 {
        let both = (size == 3 && has(2) && has(3)) || (size == 2 && (has(2) || has(3)) && x[1] >= 4);
        return if size <= 2 && x.iter().all(|&e| e == 2 || e == 3) {
            Ok(vec![ahm(3)?])
        } else if both {
            Ok(vec![FamilySpec::star(params), ahm(3)?])
        } else {
            star()
        };
    }
    let meets_23 = has(2) || has(3);
    if size == 1 && has(2) {
        return Ok(vec![ahm(3)?]);
    }
    if size == 2 && meets_23 {
        return if has(4) {
            Ok(vec![ahm(3)?, ahm(4)?])
        } else {
            Ok(vec![ahm(3)?])
        };
    }
    if size == 3 && has(2) && has(3) {
        return if has(4) {
            Ok(vec![ahm(3)?, ahm(4)?])
        } else {
            Ok(vec![ahm(3)?])
        };
    }
    let m = *x.last().expect("non-empty");
    if m <= params.r() + 1 {
        return Ok(vec![ahm(m)?]);
    }
    star()
}

fn sorted_labels(specs: &[FamilySpec]) -> Vec<String> {
    let mut labels: Vec<String> = specs.iter().map(|s| s.label()).collect();
    labels.sort();
    labels
}

/// Evaluates hitting numbers of every catalog entry against X-classes.
pub struct Classifier<'a> {
    catalog: &'a MlcifCatalog,
    mode: Mode,
    /// `rows[q][k] = C(N - q, k)`.
    rows: Vec<Vec<Count>>,
}

impl<'a> Classifier<'a> {
    pub fn new(catalog: &'a MlcifCatalog, mode: Mode) -> Result<Self> {
        let params = catalog.params();
        let n_high = params
            .n_high()
            .ok_or_else(|| Error::InvalidParams(format!("classification needs n >= 2r ({params})")))?;
        if mode == Mode::Brute {
            params.require_explicit()?;
            params.check_cap()?;
            for e in catalog.entries() {
                e.family()?;
            }
        }
        let rows = (0..=n_high as u64)
            .map(|q| {
                (0..=params.r() as u64)
                    .map(|k| binomial(n_high as u64 - q, k))
                    .collect()
            })
            .collect();
        Ok(Classifier { catalog, mode, rows })
    }

    pub fn catalog(&self) -> &MlcifCatalog {
        self.catalog
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Hitting number of every entry, in catalog order.
    pub fn hits(&self, xc: &XClass) -> Result<Vec<Count>> {
        if xc.params() != self.catalog.params() {
            return Err(Error::ParamMismatch(
                xc.params().to_string(),
                self.catalog.params().to_string(),
            ));
        }
        match self.mode {
            Mode::Brute => {
                let x = xc.representative_query()?;
                self.catalog
                    .entries()
                    .iter()
                    .map(|e| Ok(hit_brute(e.family()?, &x)))
                    .collect()
            }
            Mode::Trace => Ok(self
                .catalog
                .entries()
                .iter()
                .map(|e| {
                    let profile = e.profile().expect("n >= 2r entries carry traces");
                    profile.hit(xc.trace_mask(), &self.rows[0], &self.rows[xc.q() as usize])
                })
                .collect()),
        }
    }

    fn entry_hits(&self, hits: &[Count]) -> Vec<EntryHit> {
        self.catalog
            .entries()
            .iter()
            .zip(hits)
            .map(|(e, h)| EntryHit {
                entry: e.label().to_string(),
                hit: h.clone(),
            })
            .collect()
    }

    /// Optimal entries for `xc` together with the prediction.
    pub fn classify(&self, xc: &XClass) -> Result<ClassificationReport> {
        xc.require_nonempty()?;
        let hits = self.hits(xc)?;
        let best = hits.iter().max().expect("catalog is never empty");
        let optimal_indices: Vec<usize> = (0..hits.len()).filter(|&k| &hits[k] == best).collect();
        let entries = self.catalog.entries();
        let optimal: Vec<String> = optimal_indices
            .iter()
            .map(|&k| entries[k].label().to_string())
            .collect();
        let predicted = sorted_labels(&predicted_optimal(self.catalog.params(), xc)?);
        let mut got = optimal.clone();
        got.sort();
        let params = self.catalog.params();
        Ok(ClassificationReport {
            n: params.n(),
            r: params.r(),
            xclass: xc.to_string(),
            x: xc.representative(),
            hits: self.entry_hits(&hits),
            agrees: got == predicted,
            optimal,
            predicted,
            optimal_indices,
        })
    }

    /// Best entries excluding the star.
    pub fn nonstar(&self, xc: &XClass) -> Result<NonstarReport> {
        xc.require_nonempty()?;
        let hits = self.hits(xc)?;
        let star = self.catalog.star_index();
        let best = hits
            .iter()
            .enumerate()
            .filter(|(k, _)| Some(*k) != star)
            .map(|(_, h)| h)
            .max();
        let entries = self.catalog.entries();
        let optimal = match best {
            None => Vec::new(),
            Some(best) => (0..hits.len())
                .filter(|&k| Some(k) != star && &hits[k] == best)
                .map(|k| entries[k].label().to_string())
                .collect(),
        };
        let params = self.catalog.params();
        Ok(NonstarReport {
            n: params.n(),
            r: params.r(),
            xclass: xc.to_string(),
            x: xc.representative(),
            hits: self.entry_hits(&hits),
            optimal,
        })
    }

    /// Reports for every non-empty class, in class order.
    pub fn classify_all(&self) -> Result<Vec<ClassificationReport>> {
        xclasses(self.catalog.params())?
            .par_iter()
            .map(|xc| self.classify(xc))
            .collect()
    }
}

pub fn optimal_mlcifs(catalog: &MlcifCatalog, xc: &XClass, mode: Mode) -> Result<ClassificationReport> {
    Classifier::new(catalog, mode)?.classify(xc)
}

pub fn nonstar_optimal(catalog: &MlcifCatalog, xc: &XClass, mode: Mode) -> Result<NonstarReport> {
    Classifier::new(catalog, mode)?.nonstar(xc)
}

/// Size-`size` generators of an entry that meet `X`. Generators lie in
/// `[2r]`, so only the low part of the class matters.
pub fn generators_hitting(entry: &crate::enumerator::CatalogEntry, size: u32, xc: &XClass) -> usize {
    let x = xc.trace_mask();
    entry
        .generators()
        .layer(size)
        .into_iter()
        .filter(|&g| g & x != 0)
        .count()
}
