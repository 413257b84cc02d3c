//! Checks of the known extremal and optimality statements at fixed `(n, r)`.
//!
//! Each check is run exactly at the given parameters. Statements that only
//! hold for large `n` may fail at small `n`; such failures are data.

use crate::bits::{self, bit};
use crate::classifier::{ClassificationReport, Classifier, Mode};
use crate::count::{binomial, Count};
use crate::enumerator::{classify_rank2_generators, enumerate_mlcifs, is_mlcif, MlcifCatalog, Rank2Kind};
use crate::error::{Error, Result};
use crate::genfam::{canonical_generators, generate, make_named, FamilySpec, GenFamily};
use crate::setfam::{hit_brute, is_left_compressed, Family, Params, XQuery};
use crate::xclass::{xclasses, XClass};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// Largest intersecting family size.
    Ekr,
    /// Largest non-star size and who attains it.
    Hm,
    /// Star optimality: `|X| > r`, upward closure, `X = {2k, ..., 2r}`.
    Borg,
    /// Star optimality characterized for `|X| = r`.
    Borg2,
    /// Star optimality characterized for large `n`, `r >= 3`.
    Barber,
    /// Canonical generators lie in `[2r]` and are unique.
    Canon,
    /// Optimal MLCIFs have rank at most two.
    Nocontenders,
    /// The smallest generator layer is left-compressed.
    Compressed,
    /// `AHM_t` is an MLCIF for `3 <= t <= r+1`.
    Ahmtmax,
    /// A generator `{2,3}` forces `AHM_3`.
    C23max,
    /// Rank-2 MLCIFs are `AHM_3` or in some `I_j`, `j <= r+1`.
    Size2gen,
    /// `AHM_m` (or the star) beats every other `I_j` member.
    Ahmbest,
    /// Optimal MLCIFs narrowed to two candidates.
    Ahmopt,
    /// The predicted optimal set is exactly right for every class.
    Main,
    /// Optimal left-compressed intersecting families.
    Best,
    /// `hit(HM) = hit(S) + 1` for non-empty `X ⊆ [2, r+1]`.
    HmPlusOne,
    /// The `r = 2` case list.
    R2cases,
}

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        TheoremId::Ekr,
        TheoremId::Hm,
        TheoremId::Borg,
        TheoremId::Borg2,
        TheoremId::Barber,
        TheoremId::Canon,
        TheoremId::Nocontenders,
        TheoremId::Compressed,
        TheoremId::Ahmtmax,
        TheoremId::C23max,
        TheoremId::Size2gen,
        TheoremId::Ahmbest,
        TheoremId::Ahmopt,
        TheoremId::Main,
        TheoremId::Best,
        TheoremId::HmPlusOne,
        TheoremId::R2cases,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Ekr => "ekr",
            TheoremId::Hm => "hm",
            TheoremId::Borg => "borg",
            TheoremId::Borg2 => "borg2",
            TheoremId::Barber => "barber",
            TheoremId::Canon => "canon",
            TheoremId::Nocontenders => "nocontenders",
            TheoremId::Compressed => "compressed",
            TheoremId::Ahmtmax => "ahmtmax",
            TheoremId::C23max => "c23max",
            TheoremId::Size2gen => "size2gen",
            TheoremId::Ahmbest => "ahmbest",
            TheoremId::Ahmopt => "ahmopt",
            TheoremId::Main => "main",
            TheoremId::Best => "best",
            TheoremId::HmPlusOne => "hm_plus_one",
            TheoremId::R2cases => "r2cases",
        }
    }

    /// `(min r, needs n > 2r, exact r)`.
    fn range(&self) -> (u32, bool, Option<u32>) {
        match self {
            TheoremId::Hm => (2, true, None),
            TheoremId::Borg | TheoremId::Borg2 | TheoremId::Ahmtmax | TheoremId::C23max => (2, false, None),
            TheoremId::Main | TheoremId::HmPlusOne => (2, false, None),
            TheoremId::Barber | TheoremId::Ahmbest | TheoremId::Ahmopt | TheoremId::Best => (3, false, None),
            TheoremId::R2cases => (2, false, Some(2)),
            _ => (1, false, None),
        }
    }

    fn check_range(&self, params: Params) -> Result<()> {
        let (min_r, strict, exact) = self.range();
        let fail = |reason: String| {
            Err(Error::HypothesisRange {
                id: self.as_str().into(),
                reason,
            })
        };
        if params.n() < 2 * params.r() {
            return fail(format!("needs n >= 2r ({params})"));
        }
        if strict && params.n() == 2 * params.r() {
            return fail(format!("needs n > 2r ({params})"));
        }
        if params.r() < min_r {
            return fail(format!("needs r >= {min_r} ({params})"));
        }
        if let Some(r) = exact {
            if params.r() != r {
                return fail(format!("needs r = {r} ({params})"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub n: u32,
    pub r: u32,
    pub mode: Mode,
    /// Number of individual cases examined.
    pub checked: usize,
    /// One line per failing case, naming the witness.
    pub failures: Vec<String>,
    /// Scope remarks, e.g. parts skipped outside their range.
    pub notes: Vec<String>,
    pub passed: bool,
}

struct Outcome {
    checked: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            checked: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Enumerates the catalog and runs one check.
pub fn verify_theorem(id: TheoremId, params: Params, mode: Mode) -> Result<VerificationReport> {
    id.check_range(params)?;
    let catalog = enumerate_mlcifs(params)?;
    verify_with_catalog(id, &catalog, mode)
}

/// Runs one check against an existing catalog.
pub fn verify_with_catalog(id: TheoremId, catalog: &MlcifCatalog, mode: Mode) -> Result<VerificationReport> {
    let params = catalog.params();
    id.check_range(params)?;
    let ctx = Ctx::new(catalog, mode)?;
    let out = match id {
        TheoremId::Ekr => ctx.ekr(),
        TheoremId::Hm => ctx.hm(),
        TheoremId::Borg => ctx.borg()?,
        TheoremId::Borg2 => ctx.borg2()?,
        TheoremId::Barber => ctx.barber()?,
        TheoremId::Canon => ctx.canon()?,
        TheoremId::Nocontenders => ctx.nocontenders()?,
        TheoremId::Compressed => ctx.compressed()?,
        TheoremId::Ahmtmax => ctx.ahmtmax()?,
        TheoremId::C23max => ctx.c23max()?,
        TheoremId::Size2gen => ctx.size2gen(),
        TheoremId::Ahmbest => ctx.ahmbest()?,
        TheoremId::Ahmopt => ctx.ahmopt()?,
        TheoremId::Main | TheoremId::R2cases => ctx.main()?,
        TheoremId::Best => ctx.best()?,
        TheoremId::HmPlusOne => ctx.hm_plus_one()?,
    };
    Ok(VerificationReport {
        id: id.as_str().to_string(),
        n: params.n(),
        r: params.r(),
        mode,
        checked: out.checked,
        passed: out.failures.is_empty(),
        failures: out.failures,
        notes: out.notes,
    })
}

/// Checks the optimal left-compressed intersecting families for one class:
/// when the star is not optimal, deleting any dominance-maximal member of
/// an optimal MLCIF must lower the hitting; when it is, `m = max X` must
/// exceed `r + 1`, `AHM_m` must tie with the star, and deleting any
/// dominance-maximal member of `AHM_m` must lower the hitting.
pub fn optimal_lcif_check(catalog: &MlcifCatalog, xc: &XClass) -> Result<VerificationReport> {
    let ctx = Ctx::new(catalog, Mode::Brute)?;
    let mut out = Outcome::new();
    ctx.lcif_class(xc, &mut out)?;
    let params = catalog.params();
    Ok(VerificationReport {
        id: "best".into(),
        n: params.n(),
        r: params.r(),
        mode: Mode::Brute,
        checked: out.checked,
        passed: out.failures.is_empty(),
        failures: out.failures,
        notes: out.notes,
    })
}

/// Members of `family` whose deletion leaves the hitting unchanged; empty
/// exactly when every proper left-compressed subfamily hits `x` less often.
pub fn removable_maximal_members(family: &Family, x: &XQuery) -> Vec<u64> {
    family
        .dominance_maximal()
        .into_iter()
        .map(|s| s.mask())
        .filter(|&m| m & x.mask() == 0)
        .collect()
}

struct Ctx<'a> {
    catalog: &'a MlcifCatalog,
    classifier: Classifier<'a>,
    params: Params,
}

fn set_text(x: &[u32]) -> String {
    let parts: Vec<String> = x.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl<'a> Ctx<'a> {
    fn new(catalog: &'a MlcifCatalog, mode: Mode) -> Result<Self> {
        Ok(Ctx {
            catalog,
            classifier: Classifier::new(catalog, mode)?,
            params: catalog.params(),
        })
    }

    fn n(&self) -> u64 {
        self.params.n() as u64
    }

    fn r(&self) -> u32 {
        self.params.r()
    }

    /// Non-empty classes avoiding element 1.
    fn classes_without_one(&self) -> Result<Vec<XClass>> {
        Ok(xclasses(self.params)?
            .into_iter()
            .filter(|xc| !xc.contains_one() && !xc.is_empty())
            .collect())
    }

    fn reports(&self, classes: &[XClass]) -> Result<Vec<ClassificationReport>> {
        classes.par_iter().map(|xc| self.classifier.classify(xc)).collect()
    }

    fn index(&self, label: &str) -> Option<usize> {
        self.catalog.index_of_label(label)
    }

    fn ekr(&self) -> Outcome {
        let mut out = Outcome::new();
        let bound = binomial(self.n() - 1, self.r() as u64 - 1);
        let mut max = Count::default();
        for e in self.catalog.entries() {
            let size = e.size();
            out.check(size <= bound, || format!("{} has size {size} > {bound}", e.label()));
            max = max.max(size);
        }
        out.check(max == bound, || format!("largest size {max} differs from {bound}"));
        if let Some(s) = self.catalog.star_index() {
            let size = self.catalog.entries()[s].size();
            out.check(size == bound, || format!("star has size {size}, expected {bound}"));
        } else {
            out.check(false, || "star missing from catalog".into());
        }
        out
    }

    fn hm(&self) -> Outcome {
        let mut out = Outcome::new();
        let (n, r) = (self.n(), self.r() as u64);
        let bound = binomial(n - 1, r - 1) - binomial(n - r - 1, r - 1) + Count::from(1u32);
        let star = self.catalog.star_index();
        let mut attainers = Vec::new();
        for (k, e) in self.catalog.entries().iter().enumerate() {
            if Some(k) == star {
                continue;
            }
            let size = e.size();
            out.check(size <= bound, || format!("{} has size {size} > {bound}", e.label()));
            if size == bound {
                attainers.push(e.label().to_string());
            }
        }
        attainers.sort();
        let mut expected = vec![format!("ahm:{}", r + 1)];
        if r == 3 {
            expected.push("ahm:3".into());
        }
        expected.sort();
        out.check(attainers == expected, || {
            format!("largest non-star families {attainers:?}, expected {expected:?}")
        });
        out
    }

    fn star_optimal(&self, rep: &ClassificationReport) -> bool {
        rep.is_optimal("star")
    }

    fn borg(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        let r = self.r();
        let classes = self.classes_without_one()?;
        let reports = self.reports(&classes)?;
        for rep in &reports {
            if rep.x.len() as u32 > r {
                out.check(self.star_optimal(rep), || {
                    format!("(i) star not optimal for X={}", set_text(&rep.x))
                });
            }
        }
        let star_ok: Vec<(&Vec<u32>, bool)> = reports.iter().map(|rep| (&rep.x, self.star_optimal(rep))).collect();
        for (x_small, ok_small) in &star_ok {
            if !ok_small {
                continue;
            }
            for (x, ok) in &star_ok {
                if x.len() == x_small.len() && x != x_small && x.iter().zip(x_small.iter()).all(|(a, b)| a >= b) {
                    out.check(*ok, || {
                        format!(
                            "(ii) star optimal for X'={} but not for X={}",
                            set_text(x_small),
                            set_text(x)
                        )
                    });
                }
            }
        }
        for k in 1..=r {
            let x: Vec<u32> = (k..=r).map(|i| 2 * i).collect();
            let xc = XClass::from_elements(self.params, &x)?;
            let rep = self.classifier.classify(&xc)?;
            out.check(self.star_optimal(&rep), || {
                format!("(iii) star not optimal for X={}", set_text(&x))
            });
        }
        Ok(out)
    }

    fn borg2(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        let r = self.r();
        let classes: Vec<XClass> = self
            .classes_without_one()?
            .into_iter()
            .filter(|xc| xc.size() == r)
            .collect();
        let reports = self.reports(&classes)?;
        let evens: Vec<u32> = (1..=r).map(|i| 2 * i).collect();
        for rep in &reports {
            let x = &rep.x;
            let meets23 = x.iter().filter(|&&e| e == 2 || e == 3).count();
            let expected = if self.params.n() == 2 * r {
                x.iter().zip(evens.iter()).all(|(a, b)| a >= b)
            } else {
                match r {
                    2 => x != &[2, 3],
                    3 => meets23 <= 1,
                    _ => x != &(2..=r + 1).collect::<Vec<_>>(),
                }
            };
            let got = self.star_optimal(rep);
            out.check(got == expected, || {
                format!(
                    "X={}: star optimal is {got}, characterization says {expected}",
                    set_text(x)
                )
            });
        }
        Ok(out)
    }

    fn barber(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        let r = self.r();
        let reports = self.reports(&self.classes_without_one()?)?;
        for rep in &reports {
            let x = &rep.x;
            let meets23 = x.iter().filter(|&&e| e == 2 || e == 3).count();
            let inside = x.iter().all(|&e| e <= r + 1);
            let expected = !inside
                && match x.len() {
                    1 => true,
                    2 => meets23 == 0,
                    3 => meets23 <= 1,
                    _ => true,
                };
            let got = self.star_optimal(rep);
            out.check(got == expected, || {
                format!(
                    "X={}: star optimal is {got}, characterization says {expected}",
                    set_text(x)
                )
            });
        }
        Ok(out)
    }

    fn canon(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        let r = self.r();
        let low = bits::interval(1, 2 * r);
        let unique = self.params.n() >= 3 * r;
        if !unique {
            out.notes.push(format!(
                "uniqueness needs n >= 3r = {}; only containment checked",
                3 * r
            ));
        }
        let candidates: Vec<u64> = (0..=r).flat_map(|k| bits::k_subsets(2 * r, k)).collect();
        for e in self.catalog.entries() {
            let family = e.family()?;
            let canon = canonical_generators(family)?;
            let gens = canon.generators;
            out.check(gens.generators().iter().all(|&g| g & !low == 0), || {
                format!("{}: generators {gens} leave [2r]", e.label())
            });
            out.check(&gens == e.generators(), || {
                format!("{}: brute generators {gens} differ from {}", e.label(), e.generators())
            });
            out.check(&generate(&gens)? == family, || {
                format!("{}: {gens} does not regenerate it", e.label())
            });
            if !unique {
                continue;
            }
            for alt in perturbations(&gens, &candidates)? {
                out.check(&generate(&alt)? != family, || {
                    format!("{}: perturbation {alt} generates the same family", e.label())
                });
            }
        }
        Ok(out)
    }

    fn nocontenders(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        let entries = self.catalog.entries();
        for rep in self.reports(&self.classes_without_one()?)? {
            for &k in &rep.optimal_indices {
                let rank = entries[k].rank();
                out.check(rank.value() <= 2, || {
                    format!("X={}: optimal {} has rank {rank}", set_text(&rep.x), entries[k].label())
                });
            }
        }
        Ok(out)
    }

    fn compressed(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        for e in self.catalog.entries() {
            let k = e.rank().value();
            if k == 0 {
                continue;
            }
            let layer = Family::new(Params::new(2 * self.r(), k)?, e.generators().layer(k))?;
            out.check(is_left_compressed(&layer), || {
                format!("{}: size-{k} generators are not left-compressed", e.label())
            });
        }
        Ok(out)
    }

    fn ahm_is_mlcif(&self, t: u32) -> Result<bool> {
        let spec = FamilySpec::ahm(t, self.params)?;
        Ok(match self.classifier.mode() {
            Mode::Brute => is_mlcif(&make_named(&spec)?),
            Mode::Trace => match spec.trace_family() {
                Ok(trace) => trace.is_mlcif(),
                Err(Error::UnsupportedGenerator(_)) => false,
                Err(e) => return Err(e),
            },
        })
    }

    fn ahmtmax(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        for t in 3..=self.r() + 1 {
            let ok = self.ahm_is_mlcif(t)?;
            out.check(ok, || format!("ahm:{t} is not an MLCIF"));
            out.check(self.index(&format!("ahm:{t}")).is_some(), || {
                format!("ahm:{t} missing from catalog")
            });
        }
        Ok(out)
    }

    fn c23max(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        let g23 = bits::mask_of(&[2, 3]);
        out.check(self.index("ahm:3").is_some(), || "ahm:3 missing from catalog".into());
        for e in self.catalog.entries() {
            if e.generators().contains(g23) {
                out.check(e.label() == "ahm:3", || format!("{} has generator {{2,3}}", e.label()));
            }
        }
        Ok(out)
    }

    fn size2gen(&self) -> Outcome {
        let mut out = Outcome::new();
        for e in self.catalog.entries().iter().filter(|e| e.rank().value() == 2) {
            let res = classify_rank2_generators(e.generators());
            out.check(res.is_ok(), || format!("{}: {}", e.label(), res.as_ref().unwrap_err()));
            if let Ok(kind) = res {
                out.check(e.kind() == Some(kind), || {
                    format!("{}: stored kind disagrees", e.label())
                });
            }
        }
        out
    }

    fn i_members(&self) -> Vec<usize> {
        self.catalog
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.kind(), Some(Rank2Kind::I(_))))
            .map(|(k, _)| k)
            .collect()
    }

    fn ahmbest(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        let r = self.r();
        let members = self.i_members();
        let star = self
            .catalog
            .star_index()
            .ok_or_else(|| Error::InvalidInput("star missing".into()))?;
        let entries = self.catalog.entries();
        for xc in self.classes_without_one()? {
            let x = xc.representative();
            let inside = x.iter().all(|&e| e <= r + 1);
            if inside && x == [2] {
                continue;
            }
            let hits = self.classifier.hits(&xc)?;
            let (winner, name) = if inside {
                let m = *x.last().expect("non-empty");
                let label = format!("ahm:{m}");
                match self.index(&label) {
                    Some(k) => (k, label),
                    None => {
                        out.check(false, || format!("{label} missing from catalog"));
                        continue;
                    }
                }
            } else {
                (star, "star".to_string())
            };
            for &k in members.iter().filter(|&&k| k != winner) {
                out.check(hits[winner] > hits[k], || {
                    format!(
                        "X={}: {name} hits {} but {} hits {}",
                        set_text(&x),
                        hits[winner],
                        entries[k].label(),
                        hits[k]
                    )
                });
            }
        }
        Ok(out)
    }

    fn ahmopt(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        let r = self.r();
        for rep in self.reports(&self.classes_without_one()?)? {
            let x = &rep.x;
            let inside = x.iter().all(|&e| e <= r + 1);
            if inside && x == &[2] {
                continue;
            }
            let allowed = if inside {
                vec!["ahm:3".to_string(), format!("ahm:{}", x.last().expect("non-empty"))]
            } else {
                vec!["star".to_string(), "ahm:3".to_string()]
            };
            let extra: Vec<&String> = rep.optimal.iter().filter(|l| !allowed.contains(l)).collect();
            out.check(extra.is_empty(), || {
                format!("X={}: optimal {extra:?} outside {allowed:?}", set_text(x))
            });
        }
        Ok(out)
    }

    fn main(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        let classes = xclasses(self.params)?;
        for rep in self.reports(&classes)? {
            out.check(rep.agrees, || {
                format!(
                    "X={} ({}): optimal {:?}, predicted {:?}",
                    set_text(&rep.x),
                    rep.xclass,
                    rep.optimal,
                    rep.predicted
                )
            });
        }
        Ok(out)
    }

    fn lcif_class(&self, xc: &XClass, out: &mut Outcome) -> Result<()> {
        let rep = self.classifier.classify(xc)?;
        let x = xc.representative_query()?;
        let entries = self.catalog.entries();
        if !self.star_optimal(&rep) {
            for &k in &rep.optimal_indices {
                let family = entries[k].family()?;
                let loose = removable_maximal_members(family, &x);
                out.check(loose.is_empty(), || {
                    format!(
                        "X={}: deleting {} from optimal {} keeps the hitting",
                        set_text(&rep.x),
                        bits::format_set(loose[0]),
                        entries[k].label()
                    )
                });
            }
            return Ok(());
        }
        let m = *rep.x.last().expect("non-empty");
        if m <= self.r() + 1 {
            out.check(false, || {
                format!("X={}: star optimal although max X <= r+1", set_text(&rep.x))
            });
            return Ok(());
        }
        let ahm = make_named(&FamilySpec::ahm(m, self.params)?)?;
        let (a, s) = (hit_brute(&ahm, &x), rep.max_hit().clone());
        out.check(a == s, || {
            format!("X={}: hit(ahm:{m}) = {a}, hit(star) = {s}", set_text(&rep.x))
        });
        let loose = removable_maximal_members(&ahm, &x);
        out.check(loose.is_empty(), || {
            format!(
                "X={}: deleting {} from ahm:{m} keeps the hitting",
                set_text(&rep.x),
                bits::format_set(loose[0])
            )
        });
        Ok(())
    }

    fn best(&self) -> Result<Outcome> {
        if self.classifier.mode() != Mode::Brute {
            return Err(Error::HypothesisRange {
                id: "best".into(),
                reason: "needs brute mode".into(),
            });
        }
        let mut out = Outcome::new();
        for xc in self.classes_without_one()? {
            self.lcif_class(&xc, &mut out)?;
        }
        for m in self.r() + 2..=self.params.n() {
            let fam = make_named(&FamilySpec::ahm(m, self.params)?)?;
            out.check(!is_mlcif(&fam), || format!("ahm:{m} is an MLCIF although m > r+1"));
        }
        Ok(out)
    }

    fn hm_plus_one(&self) -> Result<Outcome> {
        let mut out = Outcome::new();
        let r = self.r();
        let hm = FamilySpec::ahm(r + 1, self.params)?;
        let star = FamilySpec::star(self.params);
        let brute = self.classifier.mode() == Mode::Brute;
        let (hm_fam, star_fam) = if brute {
            (Some(make_named(&hm)?), Some(make_named(&star)?))
        } else {
            (None, None)
        };
        let (hm_tr, star_tr) = (hm.trace_family()?, star.trace_family()?);
        for low in bits::submasks(bits::interval(2, r + 1)).filter(|&m| m != 0) {
            let xc = XClass::new(self.params, low, false, 0)?;
            let (h, s) = match (&hm_fam, &star_fam) {
                (Some(hf), Some(sf)) => {
                    let x = xc.representative_query()?;
                    (hit_brute(hf, &x), hit_brute(sf, &x))
                }
                _ => (hm_tr.hit(low, 0), star_tr.hit(low, 0)),
            };
            out.check(h == &s + 1u32, || {
                format!("X={}: hit(HM) = {h}, hit(star) = {s}", bits::format_set(low))
            });
        }
        Ok(out)
    }
}

/// Antichains near `gens`: each generator dropped, each generator replaced
/// by its one-element extensions, and each compatible set added.
fn perturbations(gens: &GenFamily, candidates: &[u64]) -> Result<Vec<GenFamily>> {
    let params = gens.params();
    let list = gens.generators();
    let mut out = Vec::new();
    for (k, &g) in list.iter().enumerate() {
        let rest: Vec<u64> = list
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &h)| h)
            .collect();
        out.push(GenFamily::new(params, rest.clone())?);
        let extended: Vec<u64> = (1..=2 * params.r())
            .filter(|&e| g & bit(e) == 0)
            .map(|e| g | bit(e))
            .filter(|&h| h.count_ones() <= params.r() && !rest.iter().any(|&o| h & o == o))
            .collect();
        if !extended.is_empty() {
            out.push(GenFamily::new(params, rest.into_iter().chain(extended))?);
        }
    }
    for &h in candidates {
        if list.iter().all(|&g| g & h != g && g & h != h) {
            out.push(GenFamily::new(params, list.iter().copied().chain([h]))?);
        }
    }
    Ok(out)
}
