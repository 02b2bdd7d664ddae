use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use lru::LruCache;

use super::digest::Digest;
use super::gsw::Ciphertext;
use crate::error::PfheError;
use crate::exec::Exec;

enum Slots {
    /// One slot per index when the capacity covers the whole universe.
    Dense(Vec<OnceLock<Arc<Ciphertext>>>),
    Lru(Mutex<LruCache<u64, Arc<Ciphertext>>>),
}

/// Memo of evaluated point ciphertexts `ĉt_i` for one digest.
///
/// Entries are pure functions of the digest, so the cache can be shared
/// across threads and across states built on the same digest.
pub struct PointCache {
    digest: Arc<Digest>,
    n: u64,
    slots: Slots,
}

impl std::fmt::Debug for PointCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PointCache")
            .field("n", &self.n)
            .field("cached", &self.cached_indices().len())
            .finish()
    }
}

impl PointCache {
    /// Cache for indices `1..=n`, holding at most `capacity` entries.
    pub fn new(digest: Arc<Digest>, n: u64, capacity: usize) -> Self {
        let slots = if capacity as u64 >= n {
            Slots::Dense((0..n).map(|_| OnceLock::new()).collect())
        } else {
            Slots::Lru(Mutex::new(LruCache::new(
                NonZeroUsize::new(capacity.max(1)).unwrap(),
            )))
        };
        PointCache { digest, n, slots }
    }

    pub fn digest(&self) -> &Arc<Digest> {
        &self.digest
    }

    /// `ĉt_i`, evaluating on a miss; `ct_mults` counts only fresh evaluations.
    pub fn get(&self, i: u64, ct_mults: &mut u64) -> Result<Arc<Ciphertext>, PfheError> {
        if i == 0 || i > self.n {
            return Err(PfheError::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        match &self.slots {
            Slots::Dense(v) => {
                let slot = &v[(i - 1) as usize];
                if let Some(c) = slot.get() {
                    return Ok(c.clone());
                }
                let c = Arc::new(self.digest.eval_point_circuit_counted(i, ct_mults)?);
                Ok(slot.get_or_init(|| c).clone())
            }
            Slots::Lru(m) => {
                if let Some(c) = m.lock().unwrap().get(&i) {
                    return Ok(c.clone());
                }
                let c = Arc::new(self.digest.eval_point_circuit_counted(i, ct_mults)?);
                m.lock().unwrap().put(i, c.clone());
                Ok(c)
            }
        }
    }

    /// Evaluates every listed index up front; returns ciphertext multiplications spent.
    pub fn prefill(&self, indices: &[u64], exec: Exec) -> Result<u64, PfheError> {
        let counts = exec.map(indices, |&i| {
            let mut m = 0;
            self.get(i, &mut m).map(|_| m)
        });
        counts.into_iter().sum()
    }

    /// Indices currently held, ascending.
    pub fn cached_indices(&self) -> Vec<u64> {
        match &self.slots {
            Slots::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, s)| s.get().is_some())
                .map(|(i, _)| i as u64 + 1)
                .collect(),
            Slots::Lru(m) => {
                let mut out: Vec<u64> = m.lock().unwrap().iter().map(|(&k, _)| k).collect();
                out.sort_unstable();
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::Modulus;
    use crate::pfhe::{sample_digest, PfheParams};

    fn digest() -> Arc<Digest> {
        let p = PfheParams::for_universe(32, 2, Modulus::pow2(30).unwrap(), 6).unwrap();
        Arc::new(sample_digest(&p, [1; 32]))
    }

    #[test]
    fn dense_cache_hits_are_free() {
        let d = digest();
        let cache = PointCache::new(d.clone(), 32, 32);
        let mut m = 0;
        let a = cache.get(7, &mut m).unwrap();
        assert_eq!(m, 5);
        let b = cache.get(7, &mut m).unwrap();
        assert_eq!(m, 5);
        assert_eq!(*a, *b);
        assert_eq!(*a, d.eval_point_circuit(7).unwrap());
        assert_eq!(cache.cached_indices(), vec![7]);
        assert!(cache.get(33, &mut m).is_err());
    }

    #[test]
    fn lru_cache_evicts() {
        let cache = PointCache::new(digest(), 32, 2);
        let mut m = 0;
        for i in [1, 2, 3] {
            cache.get(i, &mut m).unwrap();
        }
        assert_eq!(cache.cached_indices(), vec![2, 3]);
        cache.get(1, &mut m).unwrap();
        assert_eq!(m, 20);
    }

    #[test]
    fn prefill_policies_agree() {
        let idx: Vec<u64> = (1..=32).collect();
        let seq = PointCache::new(digest(), 32, 32);
        let par = PointCache::new(digest(), 32, 32);
        assert_eq!(seq.prefill(&idx, Exec::Sequential).unwrap(), 32 * 5);
        assert_eq!(par.prefill(&idx, Exec::Parallel).unwrap(), 32 * 5);
        let mut m = 0;
        for i in idx {
            assert_eq!(seq.get(i, &mut m).unwrap(), par.get(i, &mut m).unwrap());
        }
        assert_eq!(m, 0);
    }
}
