//! The syndrome-collision attack on the bare relaxed decoder, and the
//! test-mode check that the homomorphic hash rejects it deterministically.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::game::{play, Adversary, GameOutcome, Move};
use super::scenario::trial_seed;
use crate::error::{ParamError, StreamError};
use crate::exec::Exec;
use crate::modring::{next_prime_above, Modulus};
use crate::pfhe::{linear_dec, PfheParams};
use crate::recovery::{syndromes_of_entries, RecoveryParams, SparseVector};
use crate::stream::{Mode, Report, StreamParams, StreamState};

/// A k-sparse target `x′` and a nonzero kernel vector `v` of the syndrome
/// map on `2k+1` coordinates outside `supp(x′)`. The stream `x = x′ + v`
/// has the same syndromes as `x′` and support `3k+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionPlan {
    pub target: SparseVector,
    pub kernel: SparseVector,
}

impl CollisionPlan {
    pub fn stream_vector(&self) -> SparseVector {
        SparseVector::from_entries(
            self.target
                .entries()
                .iter()
                .chain(self.kernel.entries())
                .copied(),
        )
    }

    /// Draws a plan; `None` when `n < 3k+1` or no scaling of the kernel fits in `[-N, N]`.
    pub fn draw<R: Rng + ?Sized>(params: &RecoveryParams, rng: &mut R) -> Option<CollisionPlan> {
        let k = params.k;
        if params.n < 3 * k as u64 + 1 {
            return None;
        }
        let idx = rand::seq::index::sample(rng, params.n as usize, 3 * k + 1);
        let idx: Vec<u64> = idx.into_iter().map(|i| i as u64 + 1).collect();
        let bound = params.bound as i64;
        let target = SparseVector::from_entries(idx[..k].iter().map(|&i| {
            let mut v = 0;
            while v == 0 {
                v = rng.gen_range(-bound..=bound);
            }
            (i, v)
        }));
        let points = &idx[k..];
        let v = kernel_vector(&params.p, points, params.bound)?;
        let kernel = SparseVector::from_entries(points.iter().copied().zip(v));
        Some(CollisionPlan { target, kernel })
    }
}

/// A nonzero `v` with `Σ_c v_c · j_c^r = 0 (mod p)` for `r < |points| − 1`,
/// entries centered in `[-bound, bound]`.
///
/// The kernel is spanned by `v_c = 1 / Π_{d≠c}(j_c − j_d)`; the scalar is the
/// first `λ = 1, 2, …` whose multiple fits the bound.
pub fn kernel_vector(p: &Modulus, points: &[u64], bound: u64) -> Option<Vec<i64>> {
    let base: Vec<u64> = points
        .iter()
        .enumerate()
        .map(|(c, &jc)| {
            let den = points
                .iter()
                .enumerate()
                .filter(|&(d, _)| d != c)
                .fold(1, |a, (_, &jd)| p.mul(a, p.sub(jc, jd)));
            p.inv(den).ok()
        })
        .collect::<Option<_>>()?;
    let search = (p.value() - 1).min(1 << 20);
    (1..=search).find_map(|lambda| {
        let v: Vec<i64> = base.iter().map(|&b| p.centered(p.mul(b, lambda))).collect();
        v.iter().all(|x| x.unsigned_abs() <= bound).then_some(v)
    })
}

/// Streams the entries of `x` as updates in random order (values split into
/// two parts where possible), then queries once.
pub struct CollisionAdversary {
    moves: Vec<Move>,
    pos: usize,
}

impl CollisionAdversary {
    pub fn new<R: Rng + ?Sized>(x: &SparseVector, rng: &mut R) -> Self {
        let mut moves = Vec::new();
        for &(i, v) in x.entries() {
            let a = if v.abs() > 1 { v / 2 } else { v };
            moves.push(Move::Update(i, a));
            if v - a != 0 {
                moves.push(Move::Update(i, v - a));
            }
        }
        moves.shuffle(rng);
        moves.push(Move::Query);
        CollisionAdversary { moves, pos: 0 }
    }
}

impl Adversary for CollisionAdversary {
    fn name(&self) -> &str {
        "collision"
    }

    fn next_move(&mut self, _revealed: &[u8], _last: Option<&Report>) -> Move {
        let m = self.moves.get(self.pos).copied().unwrap_or(Move::Stop);
        self.pos += 1;
        m
    }
}

/// Parameters where a fitting kernel vector always exists: `p` is the
/// smallest prime above `n` and `N = (p−1)/2`, so every residue is admissible.
pub fn collision_params(n: u64, k: usize, g: usize, beta: u64) -> Result<StreamParams, ParamError> {
    let p = next_prime_above(n.max(2));
    let bound = (p - 1) / 2;
    let recovery = RecoveryParams::with_prime(n, k, bound, p)?;
    StreamParams::with_recovery(PfheParams::auto(n, k as u64, bound, g, beta)?, recovery)
}

/// One production-mode attack game. With `verify = false` the hash is
/// skipped (ablation); with `degenerate` the kernel part is dropped.
/// `None` means the kernel solve was infeasible and the trial is skipped.
pub fn syndrome_collision_attack(
    params: &StreamParams,
    seed: [u8; 32],
    verify: bool,
    degenerate: bool,
) -> Option<(GameOutcome, CollisionPlan)> {
    let mut rng = ChaCha20Rng::from_seed(seed);
    let mut plan = CollisionPlan::draw(&params.recovery, &mut rng)?;
    if degenerate {
        plan.kernel = SparseVector::empty();
    }
    debug_assert_eq!(
        syndromes_of_entries(&params.recovery, &plan.stream_vector()),
        syndromes_of_entries(&params.recovery, &plan.target)
    );
    let mut digest_seed = [0u8; 32];
    rng.fill(&mut digest_seed);
    let mut state = StreamState::setup(*params, digest_seed).with_verification(verify);
    let mut adv = CollisionAdversary::new(&plan.stream_vector(), &mut rng);
    Some((play(&mut state, &mut adv, usize::MAX), plan))
}

/// Per-trial record of [`hybrid4_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hybrid4Trial {
    pub trial: usize,
    /// The relaxed decoder returned `x′` on the attack stream.
    pub candidate_is_target: bool,
    /// `m ∈ supp(v)`: hash ≠ sketch.
    pub m_differing: u64,
    pub rejected_differing: bool,
    /// `LinearDec(sketch − hash)`, which must be `v_m`.
    pub decrypted_gap: Option<i64>,
    pub expected_gap: i64,
    /// `m ∉ supp(v)`: rejection is possible but not guaranteed.
    pub m_agreeing: u64,
    pub rejected_agreeing: bool,
    /// Streaming `x′` itself: hash = sketch.
    pub identical_accepted: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hybrid4Report {
    pub trials: Vec<Hybrid4Trial>,
    pub skipped: usize,
}

impl Hybrid4Report {
    pub fn differing_rejections(&self) -> usize {
        self.trials.iter().filter(|t| t.rejected_differing).count()
    }

    pub fn agreeing_rejections(&self) -> usize {
        self.trials.iter().filter(|t| t.rejected_agreeing).count()
    }

    pub fn identical_acceptances(&self) -> usize {
        self.trials.iter().filter(|t| t.identical_accepted).count()
    }
}

fn test_state(
    params: &StreamParams,
    m: u64,
    key_seed: [u8; 32],
    x: &SparseVector,
) -> Result<StreamState, StreamError> {
    let mut s = StreamState::setup_test(*params, m, key_seed)?;
    for &(i, v) in x.entries() {
        s.update(i, v)?;
    }
    Ok(s)
}

fn hybrid4_trial(
    params: &StreamParams,
    seed: [u8; 32],
    trial: usize,
) -> Result<Option<Hybrid4Trial>, StreamError> {
    let mut rng = ChaCha20Rng::from_seed(trial_seed(seed, "hybrid4", trial as u64));
    let Some(plan) = CollisionPlan::draw(&params.recovery, &mut rng) else {
        return Ok(None);
    };
    let x = plan.stream_vector();
    let kernel = plan.kernel.entries();
    let (m_diff, v_m) = kernel[rng.gen_range(0..kernel.len())];
    let m_agree = loop {
        let m = rng.gen_range(1..=params.n);
        if plan.kernel.get(m) == 0 {
            break m;
        }
    };
    let mut key_seed = [0u8; 32];

    rng.fill(&mut key_seed);
    let s = test_state(params, m_diff, key_seed, &x)?;
    let candidate_is_target = s.candidate().0.as_ref() == Some(&plan.target);
    let hash = s.hash_of(&plan.target)?;
    let rejected_differing = hash.body != s.sketch().body;
    let decrypted_gap = match s.mode() {
        Mode::Test { pk, sk, .. } => linear_dec(pk, sk, &s.sketch().sub(&hash)?, params.bound).ok(),
        Mode::Production => None,
    };

    rng.fill(&mut key_seed);
    let s = test_state(params, m_agree, key_seed, &x)?;
    let rejected_agreeing = s.hash_of(&plan.target)?.body != s.sketch().body;

    rng.fill(&mut key_seed);
    let s = test_state(params, m_diff, key_seed, &plan.target)?;
    let identical_accepted = s.hash_of(&plan.target)?.body == s.sketch().body;

    Ok(Some(Hybrid4Trial {
        trial,
        candidate_is_target,
        m_differing: m_diff,
        rejected_differing,
        decrypted_gap,
        expected_gap: v_m,
        m_agreeing: m_agree,
        rejected_agreeing,
        identical_accepted,
    }))
}

/// Drives the collision attack against test-mode digests with the planted
/// coordinate `m` inside and outside `supp(v)`.
pub fn hybrid4_check(
    params: &StreamParams,
    trials: usize,
    seed: [u8; 32],
    exec: Exec,
) -> Result<Hybrid4Report, StreamError> {
    let results = exec.map_range(trials, |t| hybrid4_trial(params, seed, t));
    let mut report = Hybrid4Report::default();
    for r in results {
        match r? {
            Some(t) => report.trials.push(t),
            None => report.skipped += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recovery::syndromes_of_entries;

    #[test]
    fn kernel_vector_annihilates_syndromes() {
        let p = Modulus::new(67).unwrap();
        let pts = [3u64, 8, 11, 40, 64];
        let v = kernel_vector(&p, &pts, 33).unwrap();
        let params = RecoveryParams::with_prime(64, 2, 33, 67).unwrap();
        let x = SparseVector::from_entries(pts.iter().copied().zip(v.iter().copied()));
        assert_eq!(x.support_size(), 5);
        assert_eq!(syndromes_of_entries(&params, &x), vec![0; 4]);
        // no nonzero vector fits a zero bound
        assert!(kernel_vector(&p, &pts, 0).is_none());
    }

    #[test]
    fn attack_fools_bare_decoder_only() {
        let params = collision_params(64, 2, 2, 2).unwrap();
        for t in 0..5u8 {
            let (o, plan) = syndrome_collision_attack(&params, [t; 32], true, false).unwrap();
            assert_eq!(plan.stream_vector().support_size(), 7);
            assert_eq!(o.incorrect_responses, 0);
            assert_eq!(o.bottoms, 1);
            let (o, _) = syndrome_collision_attack(&params, [t; 32], false, false).unwrap();
            assert_eq!(o.incorrect_responses, 1);
            let (o, plan) = syndrome_collision_attack(&params, [t; 32], true, true).unwrap();
            assert_eq!(o.incorrect_responses, 0);
            assert_eq!(
                o.transcript.last().unwrap().response,
                Some(Report::Vector(plan.target))
            );
        }
    }

    #[test]
    fn hybrid4_small_run() {
        let params = collision_params(32, 2, 2, 2).unwrap();
        let r = hybrid4_check(&params, 8, [1; 32], Exec::Sequential).unwrap();
        assert_eq!(r.skipped, 0);
        for t in &r.trials {
            assert!(t.candidate_is_target);
            assert!(t.rejected_differing);
            assert_eq!(t.decrypted_gap, Some(t.expected_gap));
            assert!(t.identical_accepted);
        }
    }
}
