use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest as _, Sha256};

use super::{Report, StreamParams};
use crate::error::{PfheError, StreamError};
use crate::modring::ModMatrix;
use crate::pfhe::{
    encrypted_digest, keygen, sample_digest, Ciphertext, Digest, PointCache, PublicKey, SecretKey,
};
use crate::recovery::{RecoveryOps, SparseVector, SyndromeState};

pub const STATE_MAGIC: &[u8; 4] = b"WARS";
const STATE_VERSION: u8 = 1;

/// Where the digest came from. Test mode holds the challenger's keys; they
/// are never part of the revealed state.
#[derive(Clone, Debug)]
pub enum Mode {
    Production,
    Test {
        m: u64,
        pk: PublicKey,
        sk: SecretKey,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum UpdatePath {
    #[default]
    Batched,
    Naive,
}

/// Work done by one report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReportStats {
    pub field_mults: u64,
    pub hash_evals: u64,
    pub ct_mults: u64,
}

#[derive(Clone, Debug)]
pub struct StreamState {
    params: StreamParams,
    digest: Arc<Digest>,
    sketch: Ciphertext,
    rec: SyndromeState,
    mode: Mode,
    cache: Option<Arc<PointCache>>,
    path: UpdatePath,
    verify: bool,
    ct_mults: u64,
    updates: u64,
}

impl StreamState {
    /// Production setup: the digest is expanded from `seed`.
    pub fn setup(params: StreamParams, seed: [u8; 32]) -> Self {
        let digest = Arc::new(sample_digest(&params.pfhe, seed));
        Self::with_digest(params, digest, Mode::Production).expect("digest matches params")
    }

    /// Test mode: the digest encrypts the bits of `m` under keys derived from `key_seed`.
    pub fn setup_test(
        params: StreamParams,
        m: u64,
        key_seed: [u8; 32],
    ) -> Result<Self, StreamError> {
        let (pk, sk) = keygen(&params.pfhe, key_seed);
        let mut rng = ChaCha20Rng::from_seed(key_seed);
        rng.set_stream(1);
        let digest = Arc::new(encrypted_digest(&pk, m, params.n, &mut rng)?);
        Self::with_digest(params, digest, Mode::Test { m, pk, sk })
    }

    /// State over an existing digest, e.g. one shared by many trials.
    pub fn with_digest(
        params: StreamParams,
        digest: Arc<Digest>,
        mode: Mode,
    ) -> Result<Self, StreamError> {
        if digest.params != params.pfhe || digest.ct_tilde.len() != params.pfhe.ell {
            return Err(crate::error::ParamError::new(
                "digest parameters differ from stream parameters",
            )
            .into());
        }
        let tagged = digest.ct_tilde.iter().all(|c| c.tag.is_some());
        Ok(StreamState {
            sketch: Ciphertext::zero(&params.pfhe, tagged),
            rec: SyndromeState::new(params.recovery),
            params,
            digest,
            mode,
            cache: None,
            path: UpdatePath::Batched,
            verify: true,
            ct_mults: 0,
            updates: 0,
        })
    }

    /// A flushed state holding an aggregated sketch and syndrome vector.
    pub fn from_aggregate(
        params: StreamParams,
        digest: Arc<Digest>,
        sketch: ModMatrix,
        syndromes: Vec<u64>,
    ) -> Result<Self, StreamError> {
        let mut s = Self::with_digest(params, digest, Mode::Production)?;
        if sketch.rows() != s.sketch.body.rows()
            || sketch.cols() != s.sketch.body.cols()
            || sketch.modulus() != params.pfhe.q
        {
            return Err(crate::error::ParamError::new(
                "sketch shape differs from (g+1) × h over Z_q",
            )
            .into());
        }
        s.sketch = Ciphertext::untagged(sketch);
        s.rec = SyndromeState::from_syndromes(params.recovery, syndromes)?;
        Ok(s)
    }

    /// Memoizes `ĉt_i` in a fresh cache of the given capacity (0 disables).
    pub fn with_cache_capacity(mut self, capacity: usize) -> Self {
        self.cache = (capacity > 0).then(|| {
            Arc::new(PointCache::new(
                self.digest.clone(),
                self.params.n,
                capacity,
            ))
        });
        self
    }

    /// Shares a cache built over the same digest.
    pub fn with_cache(mut self, cache: Arc<PointCache>) -> Result<Self, StreamError> {
        if !Arc::ptr_eq(cache.digest(), &self.digest) && **cache.digest() != *self.digest {
            return Err(
                crate::error::ParamError::new("cache was built for a different digest").into(),
            );
        }
        self.cache = Some(cache);
        Ok(self)
    }

    pub fn with_update_path(mut self, path: UpdatePath) -> Self {
        self.path = path;
        self
    }

    /// Disabling verification leaves the bare relaxed decoder; only for ablations.
    pub fn with_verification(mut self, verify: bool) -> Self {
        self.verify = verify;
        self
    }

    pub fn params(&self) -> &StreamParams {
        &self.params
    }

    pub fn digest(&self) -> &Arc<Digest> {
        &self.digest
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn sketch(&self) -> &Ciphertext {
        &self.sketch
    }

    pub fn syndromes(&self) -> &SyndromeState {
        &self.rec
    }

    pub fn verifies(&self) -> bool {
        self.verify
    }

    /// Ciphertext multiplications spent on updates so far.
    pub fn ct_mults(&self) -> u64 {
        self.ct_mults
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn recovery_ops(&self) -> RecoveryOps {
        self.rec.ops()
    }

    fn point(&self, i: u64, ct_mults: &mut u64) -> Result<Arc<Ciphertext>, PfheError> {
        match &self.cache {
            Some(c) => c.get(i, ct_mults),
            None => self
                .digest
                .eval_point_circuit_counted(i, ct_mults)
                .map(Arc::new),
        }
    }

    /// `x_i += delta`. Zero deltas are no-ops.
    pub fn update(&mut self, i: u64, delta: i64) -> Result<(), StreamError> {
        self.params.recovery.check_index(i)?;
        self.updates += 1;
        if delta == 0 {
            return Ok(());
        }
        match self.path {
            UpdatePath::Batched => self.rec.update_batched(i, delta)?,
            UpdatePath::Naive => self.rec.update_naive(i, delta)?,
        }
        let mut mults = 0;
        let ct = self.point(i, &mut mults)?;
        self.ct_mults += mults;
        self.sketch.add_scaled(&ct, delta)?;
        Ok(())
    }

    /// `Σ_{i ∈ supp(x′)} x′_i · ĉt_i`.
    pub fn hash_of(&self, candidate: &SparseVector) -> Result<Ciphertext, StreamError> {
        self.hash_counted(candidate, &mut ReportStats::default())
    }

    fn hash_counted(
        &self,
        candidate: &SparseVector,
        stats: &mut ReportStats,
    ) -> Result<Ciphertext, StreamError> {
        let mut hash = Ciphertext::zero(&self.params.pfhe, self.sketch.tag.is_some());
        for &(i, v) in candidate.entries() {
            let ct = self.point(i, &mut stats.ct_mults)?;
            hash.add_scaled(&ct, v)?;
            stats.hash_evals += 1;
        }
        Ok(hash)
    }

    /// The relaxed decoder's candidate, or `None` when decoding fails.
    pub fn candidate(&self) -> (Option<SparseVector>, u64) {
        let mut rec = self.rec.clone();
        let before = rec.ops().report_mults;
        let out = rec
            .report()
            .ok()
            .filter(|x| x.support_size() <= self.params.k);
        (out, rec.ops().report_mults - before)
    }

    pub fn report(&self) -> Report {
        self.report_with_stats().0
    }

    /// Decode, then accept the candidate iff its hash equals the sketch.
    pub fn report_with_stats(&self) -> (Report, ReportStats) {
        let mut stats = ReportStats::default();
        let (candidate, field_mults) = self.candidate();
        stats.field_mults = field_mults;
        let Some(x) = candidate else {
            return (Report::Bottom, stats);
        };
        if !self.verify {
            return (Report::Vector(x), stats);
        }
        match self.hash_counted(&x, &mut stats) {
            Ok(hash) if hash.body == self.sketch.body => (Report::Vector(x), stats),
            _ => (Report::Bottom, stats),
        }
    }

    /// Everything the algorithm holds, as revealed to a white-box adversary:
    /// the digest (its seed when seeded), sketch, syndromes, pending buffer
    /// and memoized indices. Test-mode keys are excluded.
    ///
    /// `WARS | version | n k N | path verify | digest | sketch | syndromes | buffer | cached`,
    /// variable parts length-prefixed, integers u64 little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(STATE_MAGIC);
        out.push(STATE_VERSION);
        for v in [self.params.n, self.params.k as u64, self.params.bound] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.push(self.path as u8);
        out.push(self.verify as u8);
        let digest = self.digest.to_bytes();
        out.extend_from_slice(&(digest.len() as u64).to_le_bytes());
        out.extend_from_slice(&digest);
        self.sketch.body.write_le(&mut out);
        for s in self.rec.syndromes() {
            out.extend_from_slice(&s.to_le_bytes());
        }
        let buffer = self.rec.buffer();
        out.extend_from_slice(&(buffer.len() as u64).to_le_bytes());
        for &(i, d) in buffer {
            out.extend_from_slice(&i.to_le_bytes());
            out.extend_from_slice(&d.to_le_bytes());
        }
        let cached = self
            .cache
            .as_ref()
            .map(|c| c.cached_indices())
            .unwrap_or_default();
        out.extend_from_slice(&(cached.len() as u64).to_le_bytes());
        for i in cached {
            out.extend_from_slice(&i.to_le_bytes());
        }
        out
    }

    /// SHA-256 of [`to_bytes`](Self::to_bytes).
    pub fn state_hash(&self) -> [u8; 32] {
        Sha256::digest(self.to_bytes()).into()
    }
}

/// Parsed form of [`StreamState::to_bytes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevealedState {
    pub n: u64,
    pub k: usize,
    pub bound: u64,
    pub digest: Digest,
    pub sketch: ModMatrix,
    pub syndromes: Vec<u64>,
    pub buffer: Vec<(u64, i64)>,
    pub cached: Vec<u64>,
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Option<&'a [u8]> {
        if self.bytes.len() < len {
            return None;
        }
        let (a, b) = self.bytes.split_at(len);
        self.bytes = b;
        Some(a)
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8)
            .map(|b| u64::from_le_bytes(b.try_into().unwrap()))
    }

    fn len(&mut self) -> Option<usize> {
        let v = self.u64()?;
        (v <= self.bytes.len() as u64).then_some(v as usize)
    }
}

impl RevealedState {
    pub fn parse(bytes: &[u8]) -> Option<RevealedState> {
        let mut r = Reader { bytes };
        if r.take(4)? != STATE_MAGIC || r.take(1)?[0] != STATE_VERSION {
            return None;
        }
        let (n, k, bound) = (r.u64()?, r.u64()? as usize, r.u64()?);
        r.take(2)?;
        let dlen = r.len()?;
        let digest = Digest::from_bytes(r.take(dlen)?).ok()?;
        let p = &digest.params;
        let sketch = ModMatrix::read_le(p.rows(), p.h(), p.q, r.take(p.rows() * p.h() * 8)?)?;
        let syndromes = (0..2 * k).map(|_| r.u64()).collect::<Option<Vec<_>>>()?;
        let blen = r.len()?;
        let buffer = (0..blen)
            .map(|_| Some((r.u64()?, r.u64()? as i64)))
            .collect::<Option<Vec<_>>>()?;
        let clen = r.len()?;
        let cached = (0..clen).map(|_| r.u64()).collect::<Option<Vec<_>>>()?;
        r.bytes.is_empty().then_some(RevealedState {
            n,
            k,
            bound,
            digest,
            sketch,
            syndromes,
            buffer,
            cached,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfhe::PfheParams;
    use crate::recovery::syndromes_of;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> StreamParams {
        StreamParams::auto(16, 2, 20, 2, 2).unwrap()
    }

    #[test]
    fn fresh_state_reports_zero_and_is_deterministic() {
        let a = StreamState::setup(toy(), [3; 32]);
        let b = StreamState::setup(toy(), [3; 32]);
        assert_eq!(a.report(), Report::Vector(SparseVector::empty()));
        assert_eq!(a.to_bytes(), b.to_bytes());
        assert_ne!(
            a.state_hash(),
            StreamState::setup(toy(), [4; 32]).state_hash()
        );
    }

    #[test]
    fn single_update_and_cancellation() {
        let mut s = StreamState::setup(toy(), [1; 32]);
        s.update(3, 5).unwrap();
        let mut expect = Ciphertext::zero(&s.params.pfhe, false);
        expect
            .add_scaled(&s.digest.eval_point_circuit(3).unwrap(), 5)
            .unwrap();
        assert_eq!(s.sketch().body, expect.body);
        assert_eq!(s.report().to_string(), "1 3:5");
        s.update(3, -5).unwrap();
        assert!(s.sketch().body.is_zero());
        assert_eq!(s.report().to_string(), "0");
        assert!(s.update(17, 1).is_err());
        assert!(s.update(0, 1).is_err());
    }

    #[test]
    fn sketch_matches_recompute_oracle() {
        let params = toy();
        let mut s = StreamState::setup(params, [9; 32]).with_cache_capacity(16);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut x = vec![0i64; 16];
        for _ in 0..100 {
            let i = rng.gen_range(1..=16u64);
            let d = rng.gen_range(-3..=3);
            s.update(i, d).unwrap();
            x[(i - 1) as usize] += d;
        }
        let mut oracle = Ciphertext::zero(&params.pfhe, false);
        for (j, &v) in x.iter().enumerate() {
            oracle
                .add_scaled(&s.digest.eval_point_circuit(j as u64 + 1).unwrap(), v)
                .unwrap();
        }
        assert_eq!(s.sketch().body, oracle.body);
        let mut rec = s.syndromes().clone();
        rec.flush();
        assert_eq!(
            rec.syndromes(),
            syndromes_of(&params.recovery, &x).unwrap().as_slice()
        );
        // the hash over the candidate's support equals the hash over all of [n]
        let v = SparseVector::from_dense(&x);
        assert_eq!(s.hash_of(&v).unwrap().body, oracle.body);
    }

    #[test]
    fn dense_stream_is_bottom() {
        let mut s = StreamState::setup(toy(), [2; 32]);
        for i in 1..=3 {
            s.update(i, 1).unwrap();
        }
        assert_eq!(s.report(), Report::Bottom);
    }

    #[test]
    fn per_update_cost_is_ell() {
        let mut s = StreamState::setup(toy(), [2; 32]);
        s.update(7, 2).unwrap();
        s.update(16, -1).unwrap();
        assert_eq!(s.ct_mults(), 2 * 4);
    }

    #[test]
    fn reveal_roundtrip() {
        let mut s = StreamState::setup(toy(), [8; 32]).with_cache_capacity(4);
        s.update(2, 7).unwrap();
        s.update(5, -1).unwrap();
        let r = RevealedState::parse(&s.to_bytes()).unwrap();
        assert_eq!(r.digest, **s.digest());
        assert_eq!(r.sketch, s.sketch().body);
        assert_eq!(r.buffer, vec![(2, 7), (5, -1)]);
        assert_eq!(r.cached, vec![2, 5]);
        let mut bytes = s.to_bytes();
        bytes.pop();
        assert!(RevealedState::parse(&bytes).is_none());
    }

    #[test]
    fn test_mode_sketch_is_tagged() {
        let params = StreamParams::auto(8, 1, 3, 2, 1).unwrap();
        let mut s = StreamState::setup_test(params, 5, [4; 32]).unwrap();
        s.update(5, 3).unwrap();
        s.update(2, 1).unwrap();
        let tag = s.sketch().tag.unwrap();
        assert_eq!(tag.plaintext, 3);
        let Mode::Test { pk, sk, .. } = s.mode() else {
            panic!()
        };
        assert_eq!(crate::pfhe::linear_dec(pk, sk, s.sketch(), 4).unwrap(), 3);
        assert!(s.to_bytes().len() > PfheParams::rows(&params.pfhe) * params.pfhe.h() * 8 * 2);
    }
}
