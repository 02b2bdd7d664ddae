use std::fmt::Write;

use thiserror::Error;

/// One trace line: `U <i> <delta>` or `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceRecord {
    Update(u64, i64),
    Query,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct TraceError {
    pub line: usize,
    pub msg: String,
}

/// Parses a trace; blank lines and `#` comments are skipped. Index ranges
/// are checked later, against the stream's `n`.
pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>, TraceError> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| TraceError { line: no + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["Q"] => out.push(TraceRecord::Query),
            ["U", i, d] => {
                let i = i
                    .parse::<u64>()
                    .map_err(|_| err(format!("bad index {i:?}")))?;
                let d = d
                    .parse::<i64>()
                    .map_err(|_| err(format!("bad delta {d:?}")))?;
                out.push(TraceRecord::Update(i, d));
            }
            _ => {
                return Err(err(format!(
                    "expected \"U <i> <delta>\" or \"Q\", got {line:?}"
                )))
            }
        }
    }
    Ok(out)
}

/// [`parse_trace`] plus the range check `1 ≤ i ≤ n`, reported with its line.
pub fn parse_trace_for(text: &str, n: u64) -> Result<Vec<TraceRecord>, TraceError> {
    let records = parse_trace(text)?;
    let lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.split('#').next().unwrap_or("").trim().is_empty());
    for ((no, _), r) in lines.zip(&records) {
        if let TraceRecord::Update(i, _) = *r {
            if i == 0 || i > n {
                return Err(TraceError {
                    line: no + 1,
                    msg: format!("index {i} outside [1, {n}]"),
                });
            }
        }
    }
    Ok(records)
}

pub fn format_trace(records: &[TraceRecord]) -> String {
    let mut s = String::new();
    for r in records {
        match r {
            TraceRecord::Update(i, d) => writeln!(s, "U {i} {d}").unwrap(),
            TraceRecord::Query => s.push_str("Q\n"),
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let t = parse_trace("# header\nU 3 5\n\n  U 1 -2  # trailing\nQ\n").unwrap();
        assert_eq!(
            t,
            vec![
                TraceRecord::Update(3, 5),
                TraceRecord::Update(1, -2),
                TraceRecord::Query
            ]
        );
        assert_eq!(parse_trace(&format_trace(&t)).unwrap(), t);
        assert_eq!(parse_trace("U 1 1\nU x 1\n").unwrap_err().line, 2);
        assert_eq!(parse_trace("Q extra").unwrap_err().line, 1);
        assert_eq!(parse_trace("U 1").unwrap_err().line, 1);
        assert_eq!(parse_trace("U -1 2").unwrap_err().line, 1);
        assert_eq!(
            parse_trace_for("Q\n# c\nU 4 1\nU 5 1\n", 4)
                .unwrap_err()
                .line,
            4
        );
        assert_eq!(parse_trace_for("U 4 1\n", 4).unwrap().len(), 1);
    }
}
