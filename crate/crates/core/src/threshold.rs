//! Scanning `n` for the point from which a statement holds throughout.

use crate::classifier::Mode;
use crate::enumerator::enumerate_mlcifs;
use crate::error::{Error, Result};
use crate::setfam::Params;
use crate::verify::{verify_with_catalog, TheoremId};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NAgreement {
    pub n: u32,
    pub agrees: bool,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub id: String,
    pub r: u32,
    pub n_min: u32,
    pub n_max: u32,
    pub per_n: Vec<NAgreement>,
    /// Least `N0` with agreement for every scanned `n >= N0`; `None` when
    /// `n_max` itself disagrees.
    pub threshold: Option<u32>,
    /// Some `n` agrees although a larger `n` disagrees.
    pub non_monotone: bool,
    pub disagreeing: Vec<u32>,
}

/// Runs `id` in trace mode for every `n` in `[2r, n_max]`, enumerating the
/// catalog afresh at each `n`.
pub fn find_threshold(r: u32, n_max: u32, id: TheoremId) -> Result<ThresholdReport> {
    let n_min = 2 * r;
    if n_max < n_min {
        return Err(Error::InvalidParams(format!("n_max={n_max} is below 2r={n_min}")));
    }
    let per_n = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let catalog = enumerate_mlcifs(Params::new(n, r)?)?;
            let rep = verify_with_catalog(id, &catalog, Mode::Trace)?;
            Ok(NAgreement {
                n,
                agrees: rep.passed,
                failures: rep.failures.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let disagreeing: Vec<u32> = per_n.iter().filter(|a| !a.agrees).map(|a| a.n).collect();
    let threshold = match disagreeing.last() {
        None => Some(n_min),
        Some(&last) if last < n_max => Some(last + 1),
        Some(_) => None,
    };
    let non_monotone = match disagreeing.last() {
        Some(&last) => per_n.iter().any(|a| a.agrees && a.n < last),
        None => false,
    };
    Ok(ThresholdReport {
        id: id.as_str().to_string(),
        r,
        n_min,
        n_max,
        per_n,
        threshold,
        non_monotone,
        disagreeing,
    })
}
