//! Seed files: a versioned TOML document.
//!
//! ```toml
//! version = 1
//! n = 2
//! unfrozen = [1, 2]        # 1-based vertex numbers
//! d = [1, 1]
//! b = [[0, -2], [2, 0]]    # integers, or "p/q" strings between frozen vertices
//! labels = ["a", "b"]      # optional
//! ```

use std::fmt::Write as _;

use lattice_core::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use seed_engine::{Rat, Seed};
use serde::Deserialize;

pub const FORMAT_VERSION: i64 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedDoc {
    version: i64,
    n: usize,
    unfrozen: Vec<usize>,
    d: Vec<i64>,
    b: Vec<Vec<toml::Value>>,
    labels: Option<Vec<String>>,
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

// first line assigning `key`, for diagnostics on semantic errors
fn line_of(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            l.strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map_or(1, |i| i + 1)
}

fn entry(v: &toml::Value, i: usize, j: usize, line: usize) -> Result<Rat> {
    let bad = |msg: String| Error::Parse { line, msg };
    match v {
        toml::Value::Integer(k) => Ok(BigRational::from_integer(BigInt::from(*k))),
        toml::Value::String(s) => {
            let (p, q) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            let p: BigInt = p.trim().parse().map_err(|_| bad(format!("b[{i}][{j}] = {s:?} is not a rational")))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad(format!("b[{i}][{j}] = {s:?} is not a rational")))?;
            if q == BigInt::from(0) {
                return Err(bad(format!("b[{i}][{j}] has a zero denominator")));
            }
            Ok(BigRational::new(p, q))
        }
        other => Err(bad(format!("b[{i}][{j}] = {other} must be an integer or a \"p/q\" string"))),
    }
}

/// Parses and validates a seed document; every seed invariant is rechecked.
pub fn parse_seed(text: &str) -> Result<Seed> {
    let doc: SeedDoc = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map_or(1, |s| line_at(text, s.start)),
        msg: e.message().to_string(),
    })?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse {
            line: line_of(text, "version"),
            msg: format!("unsupported seed file version {}", doc.version),
        });
    }
    let bline = line_of(text, "b");
    if doc.b.len() != doc.n || doc.b.iter().any(|r| r.len() != doc.n) {
        return Err(Error::Parse {
            line: bline,
            msg: format!("b must be {0}x{0}", doc.n),
        });
    }
    let mut unfrozen = Vec::with_capacity(doc.unfrozen.len());
    for &k in &doc.unfrozen {
        if k == 0 || k > doc.n {
            return Err(Error::Parse {
                line: line_of(text, "unfrozen"),
                msg: format!("unfrozen vertex {k} is outside 1..={}", doc.n),
            });
        }
        unfrozen.push(k - 1);
    }
    let rows = doc
        .b
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, v)| entry(v, i + 1, j + 1, bline))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Seed::new(doc.n, unfrozen, doc.d, rows, doc.labels)
}

pub fn read_seed(path: &str) -> Result<Seed> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read seed file {path}: {e}")))?;
    parse_seed(&text)
}

fn fmt_entry(v: &Rat) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("\"{v}\"")
    }
}

/// Canonical seed document; `parse_seed` inverts it.
pub fn serialize_seed(s: &Seed) -> String {
    let list = |v: Vec<String>| format!("[{}]", v.join(", "));
    let mut out = format!("version = {FORMAT_VERSION}\nn = {}\n", s.n());
    let _ = writeln!(
        out,
        "unfrozen = {}",
        list(s.unfrozen().iter().map(|k| (k + 1).to_string()).collect())
    );
    let _ = writeln!(out, "d = {}", list(s.d().iter().map(|w| w.to_string()).collect()));
    let rows: Vec<String> = s
        .rows()
        .iter()
        .map(|r| list(r.iter().map(fmt_entry).collect()))
        .collect();
    let _ = writeln!(out, "b = [{}]", rows.join(", "));
    if let Some(l) = s.labels() {
        let _ = writeln!(out, "labels = {}", list(l.iter().map(|x| format!("{x:?}")).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const KRONECKER: &str = "version = 1\nn = 2\nunfrozen = [1, 2]\nd = [1, 1]\nb = [[0, -2], [2, 0]]\n";

    #[test]
    fn kronecker_document() {
        let s = parse_seed(KRONECKER).unwrap();
        assert_eq!(s, Seed::skew_symmetric(&[vec![0, -2], vec![2, 0]]).unwrap());
        assert_eq!(serialize_seed(&s), KRONECKER);
    }

    #[test]
    fn rejections() {
        let bad_pair = "version = 1\nn = 2\nunfrozen = [1, 2]\nd = [1, 2]\nb = [[0, -2], [2, 0]]\n";
        let e = parse_seed(bad_pair).unwrap_err();
        assert!(e.to_string().contains("pair (1,2)"), "{e}");
        let singular = "version = 1\nn = 2\nunfrozen = [1, 2]\nd = [1, 1]\nb = [[0, 0], [0, 0]]\n";
        assert!(parse_seed(singular).unwrap_err().to_string().contains("rank"));
        let syntax = "version = 1\nn = 2\nunfrozen = [1, 2\nd = [1, 1]\n";
        assert!(matches!(parse_seed(syntax), Err(Error::Parse { .. })));
        let version = "version = 2\nn = 1\nunfrozen = [1]\nd = [1]\nb = [[0]]\n";
        assert!(matches!(parse_seed(version), Err(Error::Parse { line: 1, .. })));
        let entry = "version = 1\nn = 2\nunfrozen = [1, 2]\nd = [1, 1]\nb = [[0, \"x\"], [2, 0]]\n";
        assert!(matches!(parse_seed(entry), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn rational_frozen_entries_round_trip() {
        let text = "version = 1\nn = 4\nunfrozen = [1, 2]\nd = [1, 1, 1, 1]\nb = [[0, -1, 1, 0], [1, 0, 0, 1], [-1, 0, 0, \"1/2\"], [0, -1, \"-1/2\", 0]]\nlabels = [\"a\", \"b\", \"c\", \"d\"]\n";
        let s = parse_seed(text).unwrap();
        assert_eq!(serialize_seed(&s), text);
    }
}
