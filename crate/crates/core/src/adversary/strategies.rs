use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::game::{Adversary, Move};
use crate::stream::{Report, RevealedState};

/// Random updates chosen in advance of any reveal; queries every `query_every` rounds.
pub struct ObliviousRandom {
    rng: ChaCha20Rng,
    n: u64,
    bound: i64,
    rounds: usize,
    query_every: usize,
    step: usize,
    x: BTreeMap<u64, i64>,
}

impl ObliviousRandom {
    pub fn new(seed: [u8; 32], n: u64, bound: u64, rounds: usize, query_every: usize) -> Self {
        ObliviousRandom {
            rng: ChaCha20Rng::from_seed(seed),
            n,
            bound: bound.min(i64::MAX as u64) as i64,
            rounds,
            query_every: query_every.max(1),
            step: 0,
            x: BTreeMap::new(),
        }
    }
}

/// A delta keeping `x_i + delta` inside `[-bound, bound]`, nonzero when possible.
fn bounded_delta(rng: &mut ChaCha20Rng, cur: i64, bound: i64) -> i64 {
    let lo = -bound - cur;
    let hi = bound - cur;
    loop {
        let d = rng.gen_range(lo..=hi);
        if d != 0 || lo == hi {
            return d;
        }
    }
}

impl Adversary for ObliviousRandom {
    fn name(&self) -> &str {
        "oblivious"
    }

    fn next_move(&mut self, _revealed: &[u8], _last: Option<&Report>) -> Move {
        self.step += 1;
        if self.step > self.rounds {
            return Move::Stop;
        }
        if self.step % self.query_every == 0 {
            return Move::Query;
        }
        // Bias towards a small working set so both sparse and dense phases occur.
        let span = self.n.min(24);
        let i = self.rng.gen_range(1..=span);
        let cur = self.x.get(&i).copied().unwrap_or(0);
        let d = if cur != 0 && self.rng.gen_bool(0.4) {
            -cur
        } else {
            bounded_delta(&mut self.rng, cur, self.bound)
        };
        *self.x.entry(i).or_insert(0) += d;
        Move::Update(i, d)
    }
}

/// Keeps `x` k-sparse at all times and queries after every update.
pub struct SparseKeeper {
    rng: ChaCha20Rng,
    n: u64,
    k: usize,
    bound: i64,
    rounds: usize,
    step: usize,
    query_next: bool,
    x: BTreeMap<u64, i64>,
}

impl SparseKeeper {
    pub fn new(seed: [u8; 32], n: u64, k: usize, bound: u64, rounds: usize) -> Self {
        SparseKeeper {
            rng: ChaCha20Rng::from_seed(seed),
            n,
            k,
            bound: bound.min(i64::MAX as u64) as i64,
            rounds,
            step: 0,
            query_next: false,
            x: BTreeMap::new(),
        }
    }

    fn sparse_update(&mut self) -> (u64, i64) {
        let support: Vec<u64> = self.x.keys().copied().collect();
        let i = if support.len() >= self.k || (!support.is_empty() && self.rng.gen_bool(0.5)) {
            support[self.rng.gen_range(0..support.len())]
        } else {
            loop {
                let i = self.rng.gen_range(1..=self.n);
                if !self.x.contains_key(&i) {
                    break i;
                }
            }
        };
        let cur = self.x.get(&i).copied().unwrap_or(0);
        let d = bounded_delta(&mut self.rng, cur, self.bound);
        let v = cur + d;
        if v == 0 {
            self.x.remove(&i);
        } else {
            self.x.insert(i, v);
        }
        (i, d)
    }
}

impl Adversary for SparseKeeper {
    fn name(&self) -> &str {
        "completeness"
    }

    fn next_move(&mut self, _revealed: &[u8], _last: Option<&Report>) -> Move {
        if std::mem::take(&mut self.query_next) {
            return Move::Query;
        }
        self.step += 1;
        if self.step > self.rounds {
            return Move::Stop;
        }
        self.query_next = true;
        let (i, d) = self.sparse_update();
        Move::Update(i, d)
    }
}

/// Parses the revealed digest, sketch and syndromes and derives its next
/// update from them. Alternates between growing the support past `k` and
/// shrinking it back, querying after every update.
pub struct StateInspector {
    k: usize,
    bound: i64,
    rounds: usize,
    step: usize,
    query_next: bool,
    x: BTreeMap<u64, i64>,
    /// States that failed to parse; expected to stay zero.
    pub parse_failures: usize,
}

impl StateInspector {
    pub fn new(k: usize, bound: u64, rounds: usize) -> Self {
        StateInspector {
            k,
            bound: bound.min(i64::MAX as u64) as i64,
            rounds,
            step: 0,
            query_next: false,
            x: BTreeMap::new(),
            parse_failures: 0,
        }
    }
}

impl Adversary for StateInspector {
    fn name(&self) -> &str {
        "inspector"
    }

    fn next_move(&mut self, revealed: &[u8], _last: Option<&Report>) -> Move {
        if std::mem::take(&mut self.query_next) {
            return Move::Query;
        }
        self.step += 1;
        if self.step > self.rounds {
            return Move::Stop;
        }
        let Some(st) = RevealedState::parse(revealed) else {
            self.parse_failures += 1;
            return Move::Stop;
        };
        self.query_next = true;
        // Mix sketch entries, syndromes and digest words into a selector.
        let mut sel = st
            .sketch
            .data()
            .iter()
            .fold(0u64, |a, &v| a.rotate_left(7) ^ v);
        sel ^= st
            .syndromes
            .iter()
            .fold(0u64, |a, &v| a.wrapping_mul(31).wrapping_add(v));
        sel ^= st.digest.pk_tilde.get(0, 0);
        let growing = (self.step / (self.k + 2)) % 2 == 0;
        if !growing && !self.x.is_empty() {
            let (&i, &v) = self.x.iter().nth((sel as usize) % self.x.len()).unwrap();
            self.x.remove(&i);
            return Move::Update(i, -v);
        }
        let i = sel % st.n + 1;
        let cur = self.x.get(&i).copied().unwrap_or(0);
        let mut d = ((sel >> 32) as i64).rem_euclid(2 * self.bound + 1) - self.bound - cur;
        d = d.clamp(-self.bound - cur, self.bound - cur);
        if d == 0 {
            d = if cur < self.bound { 1 } else { -1 };
        }
        let v = cur + d;
        if v == 0 {
            self.x.remove(&i);
        } else {
            self.x.insert(i, v);
        }
        Move::Update(i, d)
    }
}
