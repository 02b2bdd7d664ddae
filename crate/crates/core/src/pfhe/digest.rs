use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use super::gsw::{encrypt, Ciphertext, NoiseTag, PublicKey};
use super::{PfheParams, Sampler};
use crate::error::PfheError;
use crate::modring::{gadget_matrix, gadget_product, ModMatrix, Modulus};

pub const DIGEST_MAGIC: &[u8; 4] = b"WARH";
pub const DIGEST_VERSION: u8 = 1;

const KIND_SEEDED: u8 = 0;
const KIND_EXPLICIT: u8 = 1;

/// Where the digest matrices came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DigestSource {
    /// Uniform matrices expanded from a 32-byte seed.
    Seeded([u8; 32]),
    /// Real encryptions (test mode only); no seed regenerates them.
    Explicit,
}

/// The hash key: one pseudo-public key and `ℓ` pseudo-ciphertexts.
#[derive(Clone, Debug)]
pub struct Digest {
    pub params: PfheParams,
    pub pk_tilde: ModMatrix,
    /// `ct_tilde[0]` carries the most significant index bit.
    pub ct_tilde: Vec<Ciphertext>,
    pub source: DigestSource,
}

impl PartialEq for Digest {
    // the sampler choice is not part of the digest
    fn eq(&self, other: &Self) -> bool {
        let p = |d: &Digest| (d.params.g, d.params.q, d.params.beta, d.params.ell);
        p(self) == p(other)
            && self.source == other.source
            && self.pk_tilde == other.pk_tilde
            && self.ct_tilde == other.ct_tilde
    }
}

impl Eq for Digest {}

fn uniform_matrix(rng: &mut ChaCha20Rng, params: &PfheParams) -> ModMatrix {
    let q = params.q.value();
    let data = (0..params.rows() * params.h())
        .map(|_| rng.gen_range(0..q))
        .collect();
    ModMatrix::from_vec(params.rows(), params.h(), data, params.q).expect("shape")
}

/// Expands `seed` into `1 + ℓ` uniform `(g+1) × h` matrices.
///
/// ChaCha20 keyed by the seed, read in counter order: `p̃k` first, then
/// `c̃t_1 … c̃t_ℓ`, each row-major.
pub fn sample_digest(params: &PfheParams, seed: [u8; 32]) -> Digest {
    let mut rng = ChaCha20Rng::from_seed(seed);
    let pk_tilde = uniform_matrix(&mut rng, params);
    let ct_tilde = (0..params.ell)
        .map(|_| Ciphertext::untagged(uniform_matrix(&mut rng, params)))
        .collect();
    Digest {
        params: *params,
        pk_tilde,
        ct_tilde,
        source: DigestSource::Seeded(seed),
    }
}

/// `ℓ`-bit pattern of index `i` (taken mod `2^ℓ`), most significant bit first.
pub fn index_bits(i: u64, ell: usize) -> Vec<bool> {
    (0..ell).map(|b| (i >> (ell - 1 - b)) & 1 == 1).collect()
}

fn check_index(params: &PfheParams, i: u64) -> Result<(), PfheError> {
    let top = 1u64 << params.ell;
    if i == 0 || i > top {
        return Err(PfheError::IndexOutOfRange { index: i, n: top });
    }
    Ok(())
}

/// Test mode: real encryptions of the bits of `m` under `pk`.
pub fn encrypted_digest<R: Rng + ?Sized>(
    pk: &PublicKey,
    m: u64,
    n: u64,
    rng: &mut R,
) -> Result<Digest, PfheError> {
    if m == 0 || m > n {
        return Err(PfheError::IndexOutOfRange { index: m, n });
    }
    let params = pk.params;
    check_index(&params, m)?;
    let ct_tilde = index_bits(m, params.ell)
        .into_iter()
        .map(|bit| encrypt(pk, bit, rng))
        .collect();
    Ok(Digest {
        params,
        pk_tilde: pk.a.clone(),
        ct_tilde,
        source: DigestSource::Explicit,
    })
}

impl Digest {
    pub fn is_test_mode(&self) -> bool {
        self.source == DigestSource::Explicit
    }

    /// Homomorphic evaluation of the point circuit `C_i`.
    ///
    /// Literal `b` is `c̃t_b` when bit `b` of `i` is set and `G − c̃t_b`
    /// otherwise. Starting from `acc = G`, each literal is folded in as
    /// `acc ← lit · G⁻¹(acc)` in most-significant-first order, so the noise
    /// grows additively by at most `h·(h·β)` per literal. Exactly `ℓ`
    /// ciphertext multiplications; bit-for-bit deterministic.
    pub fn eval_point_circuit(&self, i: u64) -> Result<Ciphertext, PfheError> {
        self.eval_point_circuit_counted(i, &mut 0)
    }

    pub fn eval_point_circuit_counted(
        &self,
        i: u64,
        ct_mults: &mut u64,
    ) -> Result<Ciphertext, PfheError> {
        let params = &self.params;
        check_index(params, i)?;
        let gadget = gadget_matrix(params.g, params.q);
        let h = params.h() as u128;
        let tagged = self.ct_tilde.iter().all(|c| c.tag.is_some());
        let mut acc = Ciphertext {
            body: gadget.clone(),
            tag: tagged.then_some(NoiseTag {
                plaintext: 1,
                bound: 0,
            }),
        };
        for (ct, bit) in self.ct_tilde.iter().zip(index_bits(i, params.ell)) {
            let (lit_body, lit_tag) = if bit {
                (ct.body.clone(), ct.tag)
            } else {
                let t = ct.tag.map(|t| NoiseTag {
                    plaintext: 1 - t.plaintext,
                    bound: t.bound,
                });
                (gadget.sub(&ct.body)?, t)
            };
            let body = gadget_product(&lit_body, &acc.body)?;
            *ct_mults += 1;
            let tag = match (lit_tag, acc.tag) {
                (Some(l), Some(a)) => Some(NoiseTag {
                    plaintext: l.plaintext * a.plaintext,
                    bound: h * l.bound + l.plaintext.unsigned_abs() * a.bound,
                }),
                _ => None,
            };
            acc = Ciphertext { body, tag };
        }
        Ok(acc)
    }

    /// `WARH | version | kind | g q L h ℓ β | seed` (+ matrices when explicit).
    pub fn to_bytes(&self) -> Vec<u8> {
        let p = &self.params;
        let mut out = Vec::with_capacity(4 + 2 + 48 + 32);
        out.extend_from_slice(DIGEST_MAGIC);
        out.push(DIGEST_VERSION);
        let (kind, seed) = match self.source {
            DigestSource::Seeded(s) => (KIND_SEEDED, s),
            DigestSource::Explicit => (KIND_EXPLICIT, [0u8; 32]),
        };
        out.push(kind);
        for v in [
            p.g as u64,
            p.q.value(),
            p.digits() as u64,
            p.h() as u64,
            p.ell as u64,
            p.beta,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&seed);
        if kind == KIND_EXPLICIT {
            self.pk_tilde.write_le(&mut out);
            for ct in &self.ct_tilde {
                ct.body.write_le(&mut out);
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Digest, DigestDecodeError> {
        if bytes.len() < 6 {
            return Err(DigestDecodeError::Truncated);
        }
        if &bytes[..4] != DIGEST_MAGIC {
            return Err(DigestDecodeError::BadMagic);
        }
        if bytes[4] != DIGEST_VERSION {
            return Err(DigestDecodeError::Version(bytes[4]));
        }
        let kind = bytes[5];
        let body = &bytes[6..];
        if body.len() < 48 + 32 {
            return Err(DigestDecodeError::Truncated);
        }
        let word = |i: usize| u64::from_le_bytes(body[i * 8..i * 8 + 8].try_into().unwrap());
        let (g, q, l, h, ell, beta) = (word(0), word(1), word(2), word(3), word(4), word(5));
        let q = Modulus::new(q).map_err(|_| DigestDecodeError::Inconsistent("modulus"))?;
        if g > 1 << 20 {
            return Err(DigestDecodeError::Inconsistent("lattice dimension"));
        }
        let params = PfheParams::new(g as usize, q, beta, ell as usize)
            .map_err(|_| DigestDecodeError::Inconsistent("message-bit count"))?
            .with_sampler(Sampler::Gaussian);
        if params.digits() as u64 != l || params.h() as u64 != h {
            return Err(DigestDecodeError::Inconsistent("L or h"));
        }
        let seed: [u8; 32] = body[48..80].try_into().unwrap();
        let rest = &body[80..];
        match kind {
            KIND_SEEDED => {
                if !rest.is_empty() {
                    return Err(DigestDecodeError::TrailingBytes);
                }
                Ok(sample_digest(&params, seed))
            }
            KIND_EXPLICIT => {
                let mat_len = params.rows() * params.h() * 8;
                let want = mat_len * (params.ell + 1);
                if rest.len() < want {
                    return Err(DigestDecodeError::Truncated);
                }
                if rest.len() > want {
                    return Err(DigestDecodeError::TrailingBytes);
                }
                let mut mats = rest.chunks_exact(mat_len).map(|c| {
                    ModMatrix::read_le(params.rows(), params.h(), q, c)
                        .ok_or(DigestDecodeError::Inconsistent("entry"))
                });
                let pk_tilde = mats.next().unwrap()?;
                let ct_tilde = mats
                    .map(|m| m.map(Ciphertext::untagged))
                    .collect::<Result<_, _>>()?;
                Ok(Digest {
                    params,
                    pk_tilde,
                    ct_tilde,
                    source: DigestSource::Explicit,
                })
            }
            other => Err(DigestDecodeError::Kind(other)),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigestDecodeError {
    #[error("bad digest magic")]
    BadMagic,
    #[error("unsupported digest version {0}")]
    Version(u8),
    #[error("unknown digest kind {0}")]
    Kind(u8),
    #[error("digest truncated")]
    Truncated,
    #[error("trailing bytes after digest")]
    TrailingBytes,
    #[error("inconsistent digest field: {0}")]
    Inconsistent(&'static str),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfhe::gsw::{keygen, linear_dec, measured_noise};

    fn params(n: u64) -> PfheParams {
        PfheParams::for_universe(n, 2, Modulus::pow2(40).unwrap(), 6).unwrap()
    }

    #[test]
    fn seeded_digest_shape_and_determinism() {
        let p = params(16);
        let d = sample_digest(&p, [7; 32]);
        assert_eq!(d.ct_tilde.len(), 4);
        assert_eq!((d.pk_tilde.rows(), d.pk_tilde.cols()), (3, p.h()));
        assert_eq!(d, sample_digest(&p, [7; 32]));
        assert_ne!(d, sample_digest(&p, [8; 32]));
    }

    #[test]
    fn index_bit_patterns() {
        assert_eq!(index_bits(3, 2), vec![true, true]);
        assert_eq!(index_bits(1, 3), vec![false, false, true]);
        assert_eq!(index_bits(4, 2), vec![false, false]);
    }

    #[test]
    fn encrypted_digest_bits_decrypt() {
        let p = params(8);
        let (pk, sk) = keygen(&p, [1; 32]);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let d = encrypted_digest(&pk, 1, 8, &mut rng).unwrap();
        let bits: Vec<i64> = d
            .ct_tilde
            .iter()
            .map(|c| linear_dec(&pk, &sk, c, 1).unwrap())
            .collect();
        assert_eq!(bits, vec![0, 0, 1]);
        assert!(encrypted_digest(&pk, 9, 8, &mut rng).is_err());
        assert!(encrypted_digest(&pk, 0, 8, &mut rng).is_err());
    }

    #[test]
    fn point_circuit_indicator() {
        let p = params(4);
        let (pk, sk) = keygen(&p, [2; 32]);
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let d = encrypted_digest(&pk, 3, 4, &mut rng).unwrap();
        let c3 = d.eval_point_circuit(3).unwrap();
        let c2 = d.eval_point_circuit(2).unwrap();
        assert_eq!(linear_dec(&pk, &sk, &c3, 1).unwrap(), 1);
        assert_eq!(linear_dec(&pk, &sk, &c2, 1).unwrap(), 0);
        assert_eq!(c3.tag.unwrap().bound, p.eval_noise_bound());
        assert!(measured_noise(&pk, &sk, &c3.body, 1) <= p.eval_noise_bound());
    }

    #[test]
    fn single_literal_chain_is_the_ciphertext() {
        let p = params(2);
        let (pk, _) = keygen(&p, [3; 32]);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let d = encrypted_digest(&pk, 1, 2, &mut rng).unwrap();
        let mut mults = 0;
        assert_eq!(
            d.eval_point_circuit_counted(1, &mut mults).unwrap().body,
            d.ct_tilde[0].body
        );
        assert_eq!(mults, 1);
    }

    #[test]
    fn evaluation_is_deterministic_and_counted() {
        let p = params(1024);
        let d = sample_digest(&p, [4; 32]);
        let mut mults = 0;
        let a = d.eval_point_circuit_counted(517, &mut mults).unwrap();
        assert_eq!(mults, 10);
        assert_eq!(a, d.eval_point_circuit(517).unwrap());
        assert!(a.tag.is_none());
        assert!(d.eval_point_circuit(0).is_err());
        assert!(d.eval_point_circuit(1025).is_err());
    }

    #[test]
    fn digest_bytes_roundtrip() {
        let p = params(16);
        let d = sample_digest(&p, [5; 32]);
        let bytes = d.to_bytes();
        assert_eq!(bytes.len(), 4 + 2 + 48 + 32);
        assert_eq!(Digest::from_bytes(&bytes).unwrap(), d);

        let (pk, _) = keygen(&p, [6; 32]);
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let t = encrypted_digest(&pk, 5, 16, &mut rng).unwrap();
        let back = Digest::from_bytes(&t.to_bytes()).unwrap();
        assert_eq!(back.pk_tilde, t.pk_tilde);
        assert_eq!(
            back.ct_tilde.iter().map(|c| &c.body).collect::<Vec<_>>(),
            t.ct_tilde.iter().map(|c| &c.body).collect::<Vec<_>>()
        );

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert_eq!(Digest::from_bytes(&bad), Err(DigestDecodeError::BadMagic));
        assert_eq!(
            Digest::from_bytes(&bytes[..40]),
            Err(DigestDecodeError::Truncated)
        );
        let mut v = bytes.clone();
        v[4] = 9;
        assert_eq!(Digest::from_bytes(&v), Err(DigestDecodeError::Version(9)));
    }

    #[test]
    fn uniformity_sanity() {
        // chi-square over 16 buckets of the top four bits; 10^6 samples
        let p = PfheParams::for_universe(1 << 12, 8, Modulus::pow2(62).unwrap(), 6).unwrap();
        let mut counts = [0u64; 16];
        let mut total = 0u64;
        let mut seed = [0u8; 32];
        while total < 1_000_000 {
            let d = sample_digest(&p, seed);
            for m in std::iter::once(&d.pk_tilde).chain(d.ct_tilde.iter().map(|c| &c.body)) {
                for &x in m.data() {
                    counts[(x >> 58) as usize] += 1;
                    total += 1;
                }
            }
            seed[0] += 1;
        }
        let expect = total as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        // 15 degrees of freedom, p = 0.001 critical value
        assert!(chi2 < 37.7, "chi2 = {chi2}");
    }
}
