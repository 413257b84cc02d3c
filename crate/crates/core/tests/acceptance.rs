//! End-to-end acceptance checks, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use mlcif_core::classifier::generators_hitting;
use mlcif_core::{
    canonical_generators, classify_rank2, enumerate_mlcifs, find_threshold, hit_brute, hit_trace, is_mlcif, make_named,
    nonstar_optimal, verify_theorem, xclasses, Classifier, Count, FamilySpec, MlcifCatalog, Mode, Params, TheoremId,
    XClass, XQuery,
};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn params(n: u32, r: u32) -> Params {
    Params::new(n, r).unwrap()
}

fn catalog(n: u32, r: u32) -> Result<MlcifCatalog, String> {
    enumerate_mlcifs(params(n, r)).map_err(err)
}

fn choose(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn mask(elems: &[u32]) -> u64 {
    elems.iter().fold(0, |m, &e| m | 1 << (e - 1))
}

fn elements(m: u64) -> Vec<u32> {
    (1..=64).filter(|&e| m & 1 << (e - 1) != 0).collect()
}

fn rsets(n: u32, r: u32) -> Vec<u64> {
    (0..1u64 << n).filter(|m| m.count_ones() == r).collect()
}

fn generated(n: u32, r: u32, gens: &[u64]) -> Vec<u64> {
    rsets(n, r)
        .into_iter()
        .filter(|&a| gens.iter().any(|&g| a & g == g))
        .collect()
}

fn hits(members: &[u64], x: u64) -> u64 {
    members.iter().filter(|&&a| a & x != 0).count() as u64
}

fn ahm(n: u32, r: u32, t: u32) -> Vec<u64> {
    let mid = mask(&(2..=t).collect::<Vec<_>>());
    rsets(n, r)
        .into_iter()
        .filter(|&a| (a & 1 != 0 && a & mid != 0) || a & mid == mid)
        .collect()
}

fn star(n: u32, r: u32) -> Vec<u64> {
    rsets(n, r).into_iter().filter(|&a| a & 1 != 0).collect()
}

/// Labels of the entries with the largest hitting, each family rebuilt
/// from its generators.
fn best_labels(cat: &MlcifCatalog, families: &[Vec<u64>], x: u64) -> BTreeSet<String> {
    let h: Vec<u64> = families.iter().map(|f| hits(f, x)).collect();
    let max = *h.iter().max().unwrap();
    cat.entries()
        .iter()
        .zip(&h)
        .filter(|&(_, &v)| v == max)
        .map(|(e, _)| e.label().to_string())
        .collect()
}

fn materialize_all(cat: &MlcifCatalog) -> Vec<Vec<u64>> {
    let p = cat.params();
    cat.entries()
        .iter()
        .map(|e| generated(p.n(), p.r(), e.generators().generators()))
        .collect()
}

fn labels(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn r2_catalog() -> Outcome {
    for n in 5..=10 {
        let cat = catalog(n, 2)?;
        let got: BTreeSet<Vec<u64>> = cat
            .entries()
            .iter()
            .map(|e| e.family().unwrap().masks().to_vec())
            .collect();
        let expected: BTreeSet<Vec<u64>> = [star(n, 2), ahm(n, 2, 3)].into_iter().collect();
        if got != expected || cat.len() != 2 {
            return Err(format!("n={n}: {} entries, families differ", cat.len()));
        }
    }
    Ok("n=5..10 give exactly the star and A_{2,3}".into())
}

fn r2_expected(x: &[u32]) -> BTreeSet<String> {
    let in23 = |e: &u32| *e == 2 || *e == 3;
    let both = match x {
        [a] if in23(a) => return labels(&["ahm:3"]),
        [2, 3] => return labels(&["ahm:3"]),
        [2, 3, z] => *z >= 4,
        [y, z] => in23(y) && *z >= 4,
        _ => false,
    };
    if both {
        labels(&["ahm:3", "star"])
    } else {
        labels(&["star"])
    }
}

fn r2_classification() -> Outcome {
    let mut checked = 0;
    for n in 5..=10u32 {
        let cat = catalog(n, 2)?;
        let families = materialize_all(&cat);
        for x in 1..1u64 << n {
            let xs = elements(x);
            let expected = r2_expected(&xs);
            let brute = best_labels(&cat, &families, x);
            let xc = XClass::from_elements(cat.params(), &xs).map_err(err)?;
            let report = mlcif_core::optimal_mlcifs(&cat, &xc, Mode::Trace).map_err(err)?;
            let lib: BTreeSet<String> = report.optimal.into_iter().collect();
            if brute != expected || lib != expected {
                return Err(format!(
                    "n={n} X={xs:?}: expected {expected:?}, brute {brute:?}, classifier {lib:?}"
                ));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} sets X match the case list"))
}

fn ekr_hm() -> Outcome {
    for n in 8..=12u32 {
        let cat = catalog(n, 3)?;
        let sizes: Vec<u128> = materialize_all(&cat).iter().map(|f| f.len() as u128).collect();
        for (e, &s) in cat.entries().iter().zip(&sizes) {
            if Count::from(s) != e.size() {
                return Err(format!("n={n} {}: size {} but {} members", e.label(), e.size(), s));
            }
        }
        let ekr = choose(n as u64 - 1, 2);
        if sizes.iter().max() != Some(&ekr) {
            return Err(format!("n={n}: largest size differs from {ekr}"));
        }
        let hm = ekr - choose(n as u64 - 4, 2) + 1;
        let mut attainers = BTreeSet::new();
        for (e, &s) in cat.entries().iter().zip(&sizes) {
            if e.label() == "star" {
                continue;
            }
            if s > hm {
                return Err(format!("n={n}: non-star {} has size {s} > {hm}", e.label()));
            }
            if s == hm {
                attainers.insert(e.label().to_string());
            }
        }
        if attainers != labels(&["ahm:3", "ahm:4"]) {
            return Err(format!("n={n}: non-star maximum attained by {attainers:?}"));
        }
    }
    Ok("r=3, n=8..12: sizes bounded as stated, extremes attained by HM and A_{2,3}".into())
}

fn canon() -> Outcome {
    let mut checked = 0;
    for (r, ns) in [(2u32, 4..=10u32), (3, 6..=12)] {
        for n in ns {
            let cat = catalog(n, r)?;
            let low = (1u64 << (2 * r)) - 1;
            for e in cat.entries() {
                let c = canonical_generators(e.family().map_err(err)?).map_err(err)?;
                if !c.is_mlcif || c.generators.generators().iter().any(|&g| g & !low != 0) {
                    return Err(format!(
                        "n={n} r={r} {}: generators {} leave [2r]",
                        e.label(),
                        c.generators
                    ));
                }
            }
            let report = verify_theorem(TheoremId::Canon, params(n, r), Mode::Brute).map_err(err)?;
            if !report.passed {
                return Err(format!("n={n} r={r}: {:?}", report.failures));
            }
            checked += report.checked;
        }
    }
    Ok(format!("{checked} containment, regeneration and perturbation checks"))
}

fn oracle_equivalence() -> Outcome {
    let mut checked = 0;
    let cases = (8..=12).map(|n| (n, 3)).chain((4..=10).map(|n| (n, 2)));
    for (n, r) in cases {
        let cat = catalog(n, r)?;
        let families = materialize_all(&cat);
        for xc in xclasses(cat.params()).map_err(err)? {
            let x = xc.representative_query().map_err(err)?;
            for (e, fam) in cat.entries().iter().zip(&families) {
                let trace = hit_trace(e.generators(), &xc).map_err(err)?;
                let brute = hit_brute(e.family().map_err(err)?, &x);
                if trace != brute || brute != Count::from(hits(fam, x.mask())) {
                    return Err(format!("n={n} r={r} {} {xc}: trace {trace}, brute {brute}", e.label()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} entry/class pairs agree"))
}

fn ahm_and_rank2() -> Outcome {
    let mut rank2 = 0;
    for r in [2u32, 3] {
        for n in 2 * r..=12 {
            for t in 3..=r + 1 {
                let fam = make_named(&FamilySpec::ahm(t, params(n, r)).map_err(err)?).map_err(err)?;
                if fam.masks() != ahm(n, r, t).as_slice() || !is_mlcif(&fam) {
                    return Err(format!("n={n} r={r}: AHM_{t} is not an MLCIF"));
                }
            }
            let cat = catalog(n, r)?;
            for e in cat.entries().iter().filter(|e| e.rank().value() == 2) {
                classify_rank2(e.family().map_err(err)?).map_err(|x| format!("n={n} r={r} {}: {x}", e.label()))?;
                rank2 += 1;
            }
        }
    }
    Ok(format!("AHM_t are MLCIFs; {rank2} rank-2 entries classified"))
}

/// The optimal labels asserted for large `n` and `r >= 3`.
fn main_expected(x: &[u32], r: u32) -> BTreeSet<String> {
    if x.contains(&1) {
        return labels(&["star"]);
    }
    let has = |e: u32| x.contains(&e);
    let ahm = |t: u32| format!("ahm:{t}");
    let mut out = BTreeSet::new();
    if x == [2] {
        out.insert(ahm(3));
    } else if (x.len() == 2 && (has(2) || has(3))) || (x.len() == 3 && has(2) && has(3)) {
        out.insert(ahm(3));
        if has(4) {
            out.insert(ahm(4));
        }
    } else if x.iter().all(|&e| e <= r + 1) {
        out.insert(ahm(*x.iter().max().unwrap()));
    } else {
        out.insert("star".into());
    }
    out
}

fn main_theorem() -> Outcome {
    let (n, r) = (30, 3);
    let cat = catalog(n, r)?;
    let classifier = Classifier::new(&cat, Mode::Trace).map_err(err)?;
    let reports = classifier.classify_all().map_err(err)?;
    let expected_count = 64 * (n - 6 + 1) as usize - 1;
    if reports.len() != expected_count {
        return Err(format!("{} classes, expected {expected_count}", reports.len()));
    }
    let mut ties = BTreeSet::new();
    for rep in &reports {
        let got: BTreeSet<String> = rep.optimal.iter().cloned().collect();
        let expected = main_expected(&rep.x, r);
        if got != expected || !rep.agrees {
            return Err(format!("X={:?}: optimal {got:?}, expected {expected:?}", rep.x));
        }
        if got.len() > 1 {
            ties.insert(rep.x.clone());
        }
    }
    let expected_ties: BTreeSet<Vec<u32>> = [vec![2, 4], vec![3, 4], vec![2, 3, 4]].into_iter().collect();
    if ties != expected_ties {
        return Err(format!("ties at {ties:?}"));
    }
    Ok(format!(
        "{} classes agree; ties exactly at {{2,4}}, {{3,4}}, {{2,3,4}}",
        reports.len()
    ))
}

fn threshold() -> Outcome {
    let report = find_threshold(3, 200, TheoremId::Main).map_err(err)?;
    let last = report.per_n.last().ok_or("empty report")?;
    if last.n != 200 || !last.agrees {
        return Err(format!("no agreement at n={}", last.n));
    }
    let agrees: Vec<(u32, bool)> = report.per_n.iter().map(|a| (a.n, a.agrees)).collect();
    let n0 = agrees.iter().rev().take_while(|a| a.1).last().map(|a| a.0);
    let non_monotone = agrees
        .iter()
        .enumerate()
        .any(|(k, a)| a.1 && agrees[k + 1..].iter().any(|b| !b.1));
    if report.threshold != n0 || report.non_monotone != non_monotone {
        return Err(format!(
            "report threshold {:?}, non_monotone {}",
            report.threshold, report.non_monotone
        ));
    }
    Ok(format!(
        "N0 = {}, non-monotone: {}, disagreeing n: {:?}",
        n0.unwrap(),
        non_monotone,
        report.disagreeing
    ))
}

fn hm_plus_one() -> Outcome {
    for n in [8, 12] {
        let (hm, s) = (ahm(n, 3, 4), star(n, 3));
        for x in 1..8u64 {
            let x = x << 1;
            if hits(&hm, x) != hits(&s, x) + 1 {
                return Err(format!("n={n} X={:?}", elements(x)));
            }
        }
        let report = verify_theorem(TheoremId::HmPlusOne, params(n, 3), Mode::Brute).map_err(err)?;
        if !report.passed || report.checked != 7 {
            return Err(format!("n={n}: {:?}", report.failures));
        }
    }
    Ok("hit(HM) = hit(star) + 1 for every non-empty X in [2,4] at n=8 and n=12".into())
}

fn nonstar_example() -> Outcome {
    let p = params(30, 3);
    let cat = enumerate_mlcifs(p).map_err(err)?;
    let xc = XClass::from_elements(p, &[5]).map_err(err)?;
    let report = nonstar_optimal(&cat, &xc, Mode::Trace).map_err(err)?;
    if report.optimal != ["a345"] {
        return Err(format!("non-star optimum {:?}", report.optimal));
    }
    let x = mask(&[5]);
    for e in cat.entries() {
        let counted = e.generators().layer(3).iter().filter(|&&g| g & x != 0).count();
        let lib = generators_hitting(e, 3, &xc);
        let ok = if e.label() == "a345" {
            counted == 6
        } else {
            counted <= 5
        };
        if !ok || lib != counted {
            return Err(format!("{}: {counted} size-3 generators meet X", e.label()));
        }
    }
    Ok("A_{3,4,5} uniquely best non-star; 6 size-3 generators meet X, others at most 5".into())
}

fn dominance_maximal(members: &[u64]) -> Vec<u64> {
    let below = |b: u64, a: u64| elements(b).iter().zip(elements(a).iter()).all(|(x, y)| x <= y);
    members
        .iter()
        .copied()
        .filter(|&a| !members.iter().any(|&b| b != a && below(a, b)))
        .collect()
}

fn ahm_ties_and_deletions() -> Outcome {
    let (n, r) = (12, 3);
    let x7 = mask(&[7]);
    let (a7, s) = (ahm(n, r, 7), star(n, r));
    let lib7 = make_named(&FamilySpec::ahm(7, params(n, r)).map_err(err)?).map_err(err)?;
    let q7 = XQuery::new(params(n, r), x7).map_err(err)?;
    if hits(&a7, x7) != hits(&s, x7) || hit_brute(&lib7, &q7) != Count::from(hits(&s, x7)) {
        return Err("X={7}: AHM_7 and the star differ".into());
    }
    let x2 = mask(&[2]);
    let a3 = ahm(n, r, 3);
    let base = hits(&a3, x2);
    let maximal = dominance_maximal(&a3);
    let lib3 = make_named(&FamilySpec::ahm(3, params(n, r)).map_err(err)?).map_err(err)?;
    let lib_max: Vec<u64> = lib3.dominance_maximal().into_iter().map(|s| s.mask()).collect();
    if maximal.is_empty() || lib_max.iter().collect::<BTreeSet<_>>() != maximal.iter().collect() {
        return Err(format!("dominance-maximal members differ: {lib_max:?} vs {maximal:?}"));
    }
    for &m in &maximal {
        let rest: Vec<u64> = a3.iter().copied().filter(|&a| a != m).collect();
        if hits(&rest, x2) >= base {
            return Err(format!("deleting {:?} keeps the hitting", elements(m)));
        }
    }
    Ok(format!(
        "hit(AHM_7) = hit(star) = {}; {} deletions from AHM_3 all lose",
        hits(&s, x7),
        maximal.len()
    ))
}

fn borg_suite() -> Outcome {
    let r = 3;
    for n in [6u32, 7] {
        let cat = catalog(n, r)?;
        let families = materialize_all(&cat);
        for x in rsets(n, r).into_iter().filter(|&x| x & 1 == 0) {
            let xs = elements(x);
            let star_opt = best_labels(&cat, &families, x).contains("star");
            let expected = if n == 2 * r {
                xs.iter().zip([2, 4, 6]).all(|(&a, b)| a >= b)
            } else {
                xs.iter().filter(|&&e| e == 2 || e == 3).count() <= 1
            };
            if star_opt != expected {
                return Err(format!("n={n} X={xs:?}: star optimal is {star_opt}"));
            }
        }
        let report = verify_theorem(TheoremId::Borg2, params(n, r), Mode::Brute).map_err(err)?;
        if !report.passed {
            return Err(format!("n={n}: {:?}", report.failures));
        }
    }
    for n in 6..=12u32 {
        let cat = catalog(n, r)?;
        let families = materialize_all(&cat);
        for k in 1..=r {
            let x = mask(&(k..=r).map(|i| 2 * i).collect::<Vec<_>>());
            if !best_labels(&cat, &families, x).contains("star") {
                return Err(format!("n={n} X={:?}: star not optimal", elements(x)));
            }
        }
    }
    Ok("|X|=3 characterizations at n=6,7; star optimal for {2k,...,6} at n=6..12".into())
}

fn main() -> ExitCode {
    let criteria: [Check; 12] = [
        ("r=2 catalog", r2_catalog),
        ("r=2 classification table", r2_classification),
        ("EKR and HM extremality", ekr_hm),
        ("generators inside [2r], unique for n >= 3r", canon),
        ("hit_trace equals hit_brute", oracle_equivalence),
        ("AHM_t maximality and rank-2 shapes", ahm_and_rank2),
        ("optimal families at n=30, r=3", main_theorem),
        ("threshold scan to n=200", threshold),
        ("HM beats the star by one", hm_plus_one),
        ("best non-star family for X={5}", nonstar_example),
        ("AHM_7 tie and AHM_3 deletions", ahm_ties_and_deletions),
        ("star optimality characterizations", borg_suite),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {name} ({detail}) [{secs:.1}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name} ({why}) [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
