use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::recovery::SparseVector;

/// Output of a query: the recovered vector, or ⊥ ("invalid input").
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Report {
    Vector(SparseVector),
    Bottom,
}

impl Report {
    pub fn is_bottom(&self) -> bool {
        matches!(self, Report::Bottom)
    }

    pub fn vector(&self) -> Option<&SparseVector> {
        match self {
            Report::Vector(v) => Some(v),
            Report::Bottom => None,
        }
    }
}

/// `f_n(x)`: `x` itself when `‖x‖₀ ≤ k`, ⊥ otherwise. `x[0]` is index 1.
pub fn ground_truth(x: &[i64], k: usize) -> Report {
    let v = SparseVector::from_dense(x);
    if v.support_size() <= k {
        Report::Vector(v)
    } else {
        Report::Bottom
    }
}

/// `BOT`, or `k′ i:v …` with ascending indices.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Report::Vector(v) => write!(f, "{v}"),
            Report::Bottom => f.write_str("BOT"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed report line: {0}")]
pub struct ReportParseError(pub String);

impl FromStr for Report {
    type Err = ReportParseError;

    /// Accepts exactly the canonical output of `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ReportParseError(s.to_string());
        if s == "BOT" {
            return Ok(Report::Bottom);
        }
        let mut parts = s.split(' ');
        let count: usize = parts.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
        let mut entries = Vec::with_capacity(count);
        for part in parts {
            let (i, v) = part.split_once(':').ok_or_else(bad)?;
            let i: u64 = i.parse().map_err(|_| bad())?;
            let v: i64 = v.parse().map_err(|_| bad())?;
            entries.push((i, v));
        }
        let v = SparseVector::from_entries(entries.iter().copied());
        if v.entries() != entries.as_slice() || entries.len() != count {
            return Err(bad());
        }
        let r = Report::Vector(v);
        if r.to_string() != s {
            return Err(bad());
        }
        Ok(r)
    }
}
