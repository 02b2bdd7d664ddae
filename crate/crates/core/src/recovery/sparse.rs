use std::fmt;

/// Nonzero entries `(index, value)` with strictly increasing indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVector {
    entries: Vec<(u64, i64)>,
}

impl SparseVector {
    pub fn empty() -> Self {
        SparseVector::default()
    }

    /// Sorts, merges duplicate indices and drops zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let mut v: Vec<(u64, i64)> = entries.into_iter().collect();
        v.sort_by_key(|e| e.0);
        let mut out: Vec<(u64, i64)> = Vec::with_capacity(v.len());
        for (i, x) in v {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += x,
                _ => out.push((i, x)),
            }
        }
        out.retain(|e| e.1 != 0);
        SparseVector { entries: out }
    }

    /// From a dense slice where position 0 is index 1.
    pub fn from_dense(x: &[i64]) -> Self {
        SparseVector {
            entries: x
                .iter()
                .enumerate()
                .filter(|e| *e.1 != 0)
                .map(|(j, &v)| (j as u64 + 1, v))
                .collect(),
        }
    }

    pub fn to_dense(&self, n: u64) -> Vec<i64> {
        let mut out = vec![0; n as usize];
        for &(i, v) in &self.entries {
            out[(i - 1) as usize] = v;
        }
        out
    }

    pub fn entries(&self) -> &[(u64, i64)] {
        &self.entries
    }

    /// `‖x‖₀`.
    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: u64) -> i64 {
        self.entries
            .binary_search_by_key(&i, |e| e.0)
            .map_or(0, |pos| self.entries[pos].1)
    }
}

/// `k′ i:v i:v …`
impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.entries.len())?;
        for (i, v) in &self.entries {
            write!(f, " {i}:{v}")?;
        }
        Ok(())
    }
}
