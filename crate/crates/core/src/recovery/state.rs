use std::collections::BTreeMap;

use super::decode::{decode_syndromes, syndromes_of_sparse, DecodeFailure};
use super::{RecoveryParams, SparseVector};
use crate::error::RecoveryError;
use crate::modring::poly::weighted_power_sums_counted;

/// Field-multiplication counters, split by code path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RecoveryOps {
    pub naive_mults: u64,
    pub batched_mults: u64,
    pub report_mults: u64,
    pub flushes: u64,
}

/// The Vandermonde sketch `s_r = Σ_j x_j · j^{r-1} mod p`, `r = 1..2k`,
/// plus a buffer of fewer than `2k` pending updates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SyndromeState {
    params: RecoveryParams,
    syndromes: Vec<u64>,
    buffer: Vec<(u64, i64)>,
    ops: RecoveryOps,
}

impl SyndromeState {
    pub fn new(params: RecoveryParams) -> Self {
        SyndromeState {
            params,
            syndromes: vec![0; params.rows()],
            buffer: Vec::new(),
            ops: RecoveryOps::default(),
        }
    }

    /// Rebuilds a flushed state from raw syndromes.
    pub fn from_syndromes(
        params: RecoveryParams,
        syndromes: Vec<u64>,
    ) -> Result<Self, RecoveryError> {
        if syndromes.len() != params.rows() || syndromes.iter().any(|&s| s >= params.p.value()) {
            return Err(RecoveryError::LengthMismatch {
                got: syndromes.len(),
                n: params.rows() as u64,
            });
        }
        Ok(SyndromeState {
            params,
            syndromes,
            buffer: Vec::new(),
            ops: RecoveryOps::default(),
        })
    }

    pub fn params(&self) -> &RecoveryParams {
        &self.params
    }

    /// Current syndromes; pending buffered updates are not included.
    pub fn syndromes(&self) -> &[u64] {
        &self.syndromes
    }

    pub fn buffer(&self) -> &[(u64, i64)] {
        &self.buffer
    }

    pub fn ops(&self) -> RecoveryOps {
        self.ops
    }

    /// Direct update: `O(k)` multiplications, powers of `i` built incrementally.
    pub fn update_naive(&mut self, i: u64, delta: i64) -> Result<(), RecoveryError> {
        self.params.check_index(i)?;
        let p = &self.params.p;
        let w = p.from_i64(delta);
        if w == 0 {
            return Ok(());
        }
        let mut pw = 1u64;
        for s in self.syndromes.iter_mut() {
            *s = p.add(*s, p.mul(w, pw));
            pw = p.mul(pw, i);
        }
        self.ops.naive_mults += 2 * self.syndromes.len() as u64;
        Ok(())
    }

    /// Buffered update; every `2k` updates are folded in as one batch.
    pub fn update_batched(&mut self, i: u64, delta: i64) -> Result<(), RecoveryError> {
        self.params.check_index(i)?;
        self.buffer.push((i, delta));
        if self.buffer.len() >= self.params.rows() {
            self.flush();
        }
        Ok(())
    }

    /// Coalesces the buffer by index and adds its transposed-Vandermonde
    /// image via weighted power sums.
    pub fn flush(&mut self) {
        if self.buffer.is_empty() {
            return;
        }
        let p = self.params.p;
        let mut merged: BTreeMap<u64, u64> = BTreeMap::new();
        for (i, d) in self.buffer.drain(..) {
            let e = merged.entry(i).or_insert(0);
            *e = p.add(*e, p.from_i64(d));
        }
        let (points, weights): (Vec<u64>, Vec<u64>) =
            merged.into_iter().filter(|&(_, w)| w != 0).unzip();
        let sums = weighted_power_sums_counted(
            &p,
            &points,
            &weights,
            self.params.rows(),
            &mut self.ops.batched_mults,
        )
        .expect("indices are distinct and nonzero below p");
        for (s, v) in self.syndromes.iter_mut().zip(sums) {
            *s = p.add(*s, v);
        }
        self.ops.flushes += 1;
    }

    /// Flushes, then decodes.
    pub fn report(&mut self) -> Result<SparseVector, DecodeFailure> {
        self.flush();
        decode_syndromes(&self.params, &self.syndromes, &mut self.ops.report_mults)
    }

    /// Adds another flushed state's syndromes (linearity of the measurement).
    pub fn absorb(&mut self, syndromes: &[u64]) {
        let p = self.params.p;
        for (s, &o) in self.syndromes.iter_mut().zip(syndromes) {
            *s = p.add(*s, o);
        }
    }
}

/// Test oracle: the naive double loop `Σ_j x_j · j^{r-1}` over a dense vector
/// whose position 0 is index 1.
pub fn syndromes_of(params: &RecoveryParams, x: &[i64]) -> Result<Vec<u64>, RecoveryError> {
    if x.len() as u64 != params.n {
        return Err(RecoveryError::LengthMismatch {
            got: x.len(),
            n: params.n,
        });
    }
    let p = &params.p;
    let mut s = vec![0u64; params.rows()];
    for (r, sr) in s.iter_mut().enumerate() {
        for (j, &v) in x.iter().enumerate() {
            *sr = p.add(*sr, p.mul(p.from_i64(v), p.pow(j as u64 + 1, r as u64)));
        }
    }
    Ok(s)
}

/// Syndromes of sparse data through the batched path: chunks of `2k`
/// entries, one weighted power sum each. Adds field multiplications to `ops`.
pub fn measure_sparse(params: &RecoveryParams, x: &SparseVector, ops: &mut u64) -> Vec<u64> {
    let p = params.p;
    let mut s = vec![0u64; params.rows()];
    for chunk in x.entries().chunks(params.rows()) {
        let points: Vec<u64> = chunk.iter().map(|e| e.0).collect();
        let weights: Vec<u64> = chunk.iter().map(|e| p.from_i64(e.1)).collect();
        let part = weighted_power_sums_counted(&p, &points, &weights, params.rows(), ops)
            .expect("distinct indices");
        for (a, b) in s.iter_mut().zip(part) {
            *a = p.add(*a, b);
        }
    }
    s
}

/// Syndromes of a sparse candidate, naive `O(k·|x|)` route.
pub fn syndromes_of_entries(params: &RecoveryParams, x: &SparseVector) -> Vec<u64> {
    syndromes_of_sparse(&params.p, x.entries(), params.rows(), &mut 0)
}
