use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{PfheParams, Sampler};
use crate::error::{ArithError, PfheError};
use crate::modring::{gadget_matrix, ModMatrix};

/// Plaintext and noise bound carried by test-mode ciphertexts.
///
/// `bound` is an upper bound on `|centered(sk·C − μ·sk·G)|` entrywise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NoiseTag {
    pub plaintext: i128,
    pub bound: u128,
}

/// A `(g+1) × h` GSW ciphertext (or pseudo-ciphertext).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ciphertext {
    pub body: ModMatrix,
    pub tag: Option<NoiseTag>,
}

impl Ciphertext {
    pub fn untagged(body: ModMatrix) -> Self {
        Ciphertext { body, tag: None }
    }

    /// The all-zero ciphertext; tagged as a noiseless encryption of 0 when asked.
    pub fn zero(params: &PfheParams, tagged: bool) -> Self {
        Ciphertext {
            body: ModMatrix::zeros(params.rows(), params.h(), params.q),
            tag: tagged.then_some(NoiseTag {
                plaintext: 0,
                bound: 0,
            }),
        }
    }

    /// `self += factor · other`, tracking tags when both sides carry one.
    pub fn add_scaled(&mut self, other: &Ciphertext, factor: i64) -> Result<(), ArithError> {
        self.body.add_scaled(&other.body, factor)?;
        self.tag = match (self.tag, other.tag) {
            (Some(a), Some(b)) => Some(NoiseTag {
                plaintext: a.plaintext + factor as i128 * b.plaintext,
                bound: a
                    .bound
                    .saturating_add(factor.unsigned_abs() as u128 * b.bound),
            }),
            _ => None,
        };
        Ok(())
    }

    pub fn sub(&self, other: &Ciphertext) -> Result<Ciphertext, ArithError> {
        let mut out = self.clone();
        out.add_scaled(other, -1)?;
        Ok(out)
    }
}

/// `sk = [−s̄ | 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    pub s_bar: Vec<u64>,
    pub sk: Vec<u64>,
}

/// `A`: `g` uniform rows followed by `α = s̄ᵀ·Ā + eᵀ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub params: PfheParams,
    pub a: ModMatrix,
}

/// One β-bounded noise sample.
pub fn sample_noise<R: Rng + ?Sized>(params: &PfheParams, rng: &mut R) -> i64 {
    let beta = params.beta as i64;
    if beta == 0 {
        return 0;
    }
    match params.sampler {
        Sampler::Gaussian => {
            let sigma = params.beta as f64 / 6.0;
            loop {
                let e = rng.gen_range(-beta..=beta);
                let accept = (-((e * e) as f64) / (2.0 * sigma * sigma)).exp();
                if rng.gen::<f64>() < accept {
                    return e;
                }
            }
        }
        Sampler::Binomial => {
            let mut e = 0i64;
            for _ in 0..beta {
                e += (rng.next_u32() & 1) as i64 - (rng.next_u32() & 1) as i64;
            }
            e
        }
    }
}

/// Key generation, deterministic in `seed`.
pub fn keygen(params: &PfheParams, seed: [u8; 32]) -> (PublicKey, SecretKey) {
    let mut rng = ChaCha20Rng::from_seed(seed);
    let q = params.q;
    let (g, h) = (params.g, params.h());
    let s_bar: Vec<u64> = (0..g).map(|_| rng.gen_range(0..q.value())).collect();
    let mut a = ModMatrix::zeros(g + 1, h, q);
    for r in 0..g {
        for c in 0..h {
            a.set(r, c, rng.gen_range(0..q.value()));
        }
    }
    for c in 0..h {
        let e = sample_noise(params, &mut rng);
        let mut alpha = q.from_i64(e);
        for (r, &s) in s_bar.iter().enumerate() {
            alpha = q.add(alpha, q.mul(s, a.get(r, c)));
        }
        a.set(g, c, alpha);
    }
    let mut sk: Vec<u64> = s_bar.iter().map(|&s| q.neg(s)).collect();
    sk.push(1);
    (PublicKey { params: *params, a }, SecretKey { s_bar, sk })
}

/// `A·R + μ·G` with `R ← {0,1}^{h×h}`; tagged with noise bound `h·β`.
pub fn encrypt<R: Rng + ?Sized>(pk: &PublicKey, mu: bool, rng: &mut R) -> Ciphertext {
    let params = &pk.params;
    let h = params.h();
    let bits: Vec<u64> = (0..h * h).map(|_| (rng.next_u32() & 1) as u64).collect();
    let r = ModMatrix::from_vec(h, h, bits, params.q).expect("shape");
    let mut body = pk.a.mat_mul(&r).expect("pk is (g+1)×h");
    if mu {
        body = body.add(&gadget_matrix(params.g, params.q)).expect("shape");
    }
    Ciphertext {
        body,
        tag: Some(NoiseTag {
            plaintext: mu as i128,
            bound: params.fresh_noise_bound(),
        }),
    }
}

/// `sk · C`, the decryption row.
pub fn phase(sk: &SecretKey, c: &ModMatrix) -> Vec<u64> {
    let q = c.modulus();
    (0..c.cols())
        .map(|col| (0..c.rows()).fold(0, |acc, r| q.add(acc, q.mul(sk.sk[r], c.get(r, col)))))
        .collect()
}

/// Largest `|centered(sk·C − μ·sk·G)|` entry: the measured noise.
pub fn measured_noise(pk: &PublicKey, sk: &SecretKey, c: &ModMatrix, mu: i128) -> u128 {
    let q = pk.params.q;
    let g = gadget_matrix(pk.params.g, q);
    let ph = phase(sk, c);
    let skg = phase(sk, &g);
    let mu_res = q.from_i128(mu);
    ph.iter()
        .zip(&skg)
        .map(|(&v, &s)| q.centered(q.sub(v, q.mul(mu_res, s))).unsigned_abs() as u128)
        .max()
        .unwrap_or(0)
}

/// Gadget column `j* = ⌊log2(q / (4·B_msg))⌋` and the strict noise budget
/// `2^{j*-1}` it tolerates.
pub fn decoding_window(params: &PfheParams, b_msg: u64) -> Result<(u32, u128), PfheError> {
    let denom = 4u128 * b_msg.max(1) as u128;
    let ratio = params.q.value() as u128 / denom;
    if ratio == 0 {
        return Err(PfheError::NoiseBudget {
            bound: 0,
            budget: 0,
        });
    }
    let j = 127 - ratio.leading_zeros();
    let budget = if j == 0 { 0 } else { 1u128 << (j - 1) };
    Ok((j, budget))
}

/// Decodes `M = Σ x_i·ct_i` to `Σ x_i·μ_i` when `|Σ x_i·μ_i| ≤ b_msg`.
///
/// Reads the single gadget column `j*` of the last block, where `sk` has
/// entry 1. The tag on `m` must certify the noise stays below `2^{j*-1}`.
pub fn linear_dec(
    pk: &PublicKey,
    sk: &SecretKey,
    m: &Ciphertext,
    b_msg: u64,
) -> Result<i64, PfheError> {
    let tag = m.tag.ok_or(PfheError::Untagged)?;
    let (_, budget) = decoding_window(&pk.params, b_msg)?;
    if tag.bound >= budget || tag.plaintext.unsigned_abs() > b_msg as u128 {
        return Err(PfheError::NoiseBudget {
            bound: tag.bound,
            budget,
        });
    }
    linear_dec_unchecked(pk, sk, &m.body, b_msg)
}

/// [`linear_dec`] without the tag check; correct only inside the budget.
pub fn linear_dec_unchecked(
    pk: &PublicKey,
    sk: &SecretKey,
    m: &ModMatrix,
    b_msg: u64,
) -> Result<i64, PfheError> {
    let params = &pk.params;
    let q = params.q;
    let (j, _) = decoding_window(params, b_msg)?;
    let col = params.g * params.digits() + j as usize;
    let v = (0..m.rows()).fold(0, |acc, r| q.add(acc, q.mul(sk.sk[r], m.get(r, col))));
    let c = q.centered(v) as i128;
    let scale = 1i128 << j;
    Ok((c + scale / 2).div_euclid(scale) as i64)
}
