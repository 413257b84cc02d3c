//! Hitting-set classes `(X ∩ [2r], |X \ [2r]|)`.
//!
//! Every family generated inside `[2r]` has the same hitting with any two
//! sets in one class, so a class stands for all of its realizations.

use crate::bits::{self, bit};
use crate::error::{Error, Result};
use crate::setfam::{Params, XQuery};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XClass {
    /// Subset of `[2, 2r]`.
    low: u64,
    contains_one: bool,
    /// Elements of `X` above `2r`.
    q: u32,
    params: Params,
}

impl XClass {
    pub fn new(params: Params, low: u64, contains_one: bool, q: u32) -> Result<Self> {
        let n_high = params
            .n_high()
            .ok_or_else(|| Error::InvalidParams(format!("hitting classes need n >= 2r ({params})")))?;
        let allowed = bits::interval(2, 2 * params.r());
        if low & !allowed != 0 {
            return Err(Error::InvalidSet(format!(
                "low part {} not within [2, {}]",
                bits::format_set(low),
                2 * params.r()
            )));
        }
        if q > n_high {
            return Err(Error::InvalidSet(format!("q={q} exceeds n-2r={n_high}")));
        }
        Ok(XClass {
            low,
            contains_one,
            q,
            params,
        })
    }

    /// Class of an explicit set `X ⊆ [n]`; elements may exceed 64.
    pub fn from_elements(params: Params, elems: &[u32]) -> Result<Self> {
        let two_r = 2 * params.r();
        let mut sorted = elems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|&e| e == 0 || e > params.n()) {
            return Err(Error::InvalidSet(format!("{elems:?} not within [{}]", params.n())));
        }
        let low = sorted
            .iter()
            .filter(|&&e| (2..=two_r).contains(&e))
            .fold(0, |m, &e| m | bit(e));
        let q = sorted.iter().filter(|&&e| e > two_r).count() as u32;
        Self::new(params, low, sorted.first() == Some(&1), q)
    }

    pub fn from_query(x: &XQuery) -> Result<Self> {
        let elems: Vec<u32> = bits::elements(x.mask()).collect();
        Self::from_elements(x.params(), &elems)
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn low(&self) -> u64 {
        self.low
    }

    pub fn contains_one(&self) -> bool {
        self.contains_one
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `X ∩ [2r]`, element 1 included.
    pub fn trace_mask(&self) -> u64 {
        self.low | if self.contains_one { 1 } else { 0 }
    }

    pub fn size(&self) -> u32 {
        self.trace_mask().count_ones() + self.q
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    pub fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyX)
        } else {
            Ok(())
        }
    }

    /// The representative `low ∪ {1?} ∪ {2r+1, ..., 2r+q}` as sorted elements.
    pub fn representative(&self) -> Vec<u32> {
        let two_r = 2 * self.params.r();
        bits::elements(self.trace_mask())
            .chain((two_r + 1)..=(two_r + self.q))
            .collect()
    }

    /// The representative as an explicit query (`n <= 64`).
    pub fn representative_query(&self) -> Result<XQuery> {
        XQuery::from_elements(self.params, &self.representative())
    }

    /// `max X` of the representative.
    pub fn max_element(&self) -> Option<u32> {
        self.representative().last().copied()
    }
}

/// All non-empty classes for `n >= 2r`: `2^(2r) * (n - 2r + 1) - 1` of them,
/// ordered by low part, then element 1, then `q`.
pub fn xclasses(params: Params) -> Result<Vec<XClass>> {
    let n_high = params
        .n_high()
        .ok_or_else(|| Error::InvalidParams(format!("hitting classes need n >= 2r ({params})")))?;
    let span = bits::interval(2, 2 * params.r());
    let mut out = Vec::new();
    for low in bits::submasks(span) {
        for one in [false, true] {
            for q in 0..=n_high {
                let xc = XClass {
                    low,
                    contains_one: one,
                    q,
                    params,
                };
                if !xc.is_empty() {
                    out.push(xc);
                }
            }
        }
    }
    Ok(out)
}

impl fmt::Display for XClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "low={},q={}", bits::format_list(self.low), self.q)?;
        if self.contains_one {
            f.write_str(",one")?;
        }
        Ok(())
    }
}

/// Parses `low=<list>,q=<int>[,one]` against `params`.
pub fn parse_xclass(params: Params, text: &str) -> Result<XClass> {
    let mut low = 0u64;
    let mut q = 0u32;
    let mut one = false;
    let mut in_low = false;
    for tok in text.split(',').map(str::trim) {
        if let Some(rest) = tok.strip_prefix("low=") {
            in_low = true;
            if !rest.is_empty() {
                low |= parse_low_element(rest)?;
            }
        } else if let Some(rest) = tok.strip_prefix("q=") {
            in_low = false;
            q = rest.parse().map_err(|_| Error::Parse(format!("bad q `{rest}`")))?;
        } else if tok == "one" {
            in_low = false;
            one = true;
        } else if in_low && !tok.is_empty() {
            low |= parse_low_element(tok)?;
        } else if !tok.is_empty() {
            return Err(Error::Parse(format!("unexpected token `{tok}` in x-class `{text}`")));
        }
    }
    XClass::new(params, low, one, q)
}

fn parse_low_element(tok: &str) -> Result<u64> {
    let e: u32 = tok.parse().map_err(|_| Error::Parse(format!("bad element `{tok}`")))?;
    if !(1..=64).contains(&e) {
        return Err(Error::Parse(format!("element {e} out of range")));
    }
    Ok(bit(e))
}

impl FromStr for XClass {
    type Err = Error;
    /// Requires an `n=..,r=..;` prefix; use [`parse_xclass`] when params are known.
    fn from_str(s: &str) -> Result<Self> {
        let (head, body) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `n=..,r=..;low=..` in `{s}`")))?;
        let mut n = None;
        let mut r = None;
        for tok in head.split(',') {
            match tok.trim().split_once('=') {
                Some(("n", v)) => n = v.parse().ok(),
                Some(("r", v)) => r = v.parse().ok(),
                _ => return Err(Error::Parse(format!("bad params `{head}`"))),
            }
        }
        let params = Params::new(
            n.ok_or_else(|| Error::Parse("missing n".into()))?,
            r.ok_or_else(|| Error::Parse("missing r".into()))?,
        )?;
        parse_xclass(params, body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, r: u32) -> Params {
        Params::new(n, r).unwrap()
    }

    #[test]
    fn class_counts() {
        assert_eq!(xclasses(p(6, 3)).unwrap().len(), 63);
        assert_eq!(xclasses(p(10, 3)).unwrap().len(), 319);
        assert_eq!(xclasses(p(30, 3)).unwrap().len(), 64 * 25 - 1);
        assert!(xclasses(p(5, 3)).is_err());
    }

    #[test]
    fn classes_with_one_exist() {
        let all = xclasses(p(8, 3)).unwrap();
        assert!(all.iter().any(|x| x.contains_one()));
        assert!(all.iter().all(|x| !x.is_empty()));
    }

    #[test]
    fn from_elements_splits_parts() {
        let xc = XClass::from_elements(p(10, 3), &[1, 2, 7, 9]).unwrap();
        assert!(xc.contains_one());
        assert_eq!(xc.low(), bit(2));
        assert_eq!(xc.q(), 2);
        assert_eq!(xc.representative(), vec![1, 2, 7, 8]);
        assert_eq!(xc.size(), 4);
        assert!(XClass::from_elements(p(10, 3), &[11]).is_err());
    }

    #[test]
    fn large_n_is_allowed() {
        let xc = XClass::from_elements(p(200, 3), &[5, 150, 199]).unwrap();
        assert_eq!(xc.q(), 2);
        assert!(xc.representative_query().is_err());
    }

    #[test]
    fn text_round_trip() {
        let params = p(12, 3);
        for xc in xclasses(params).unwrap() {
            assert_eq!(parse_xclass(params, &xc.to_string()).unwrap(), xc);
        }
        let parsed: XClass = "n=12,r=3;low=2,5,q=1,one".parse().unwrap();
        assert_eq!(parsed.representative(), vec![1, 2, 5, 7]);
        assert!(parse_xclass(params, "low=2,q=9").is_err());
        assert!(parse_xclass(params, "low=1").is_err());
        assert!(parse_xclass(params, "bogus").is_err());
    }
}
