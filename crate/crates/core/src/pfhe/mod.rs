//! GSW-style pseudorandom FHE used as a verification hash.
//!
//! Production code only ever sees a [`Digest`] sampled uniformly from a
//! seed. Real keys and encryptions exist for test mode, where the digest
//! encrypts the bits of a planted coordinate and [`linear_dec`] opens
//! integer combinations of evaluated ciphertexts.

mod cache;
mod digest;
mod gsw;
mod params;

pub use cache::PointCache;
pub use digest::{
    encrypted_digest, index_bits, sample_digest, Digest, DigestDecodeError, DigestSource,
    DIGEST_MAGIC, DIGEST_VERSION,
};
pub use gsw::{
    decoding_window, encrypt, keygen, linear_dec, linear_dec_unchecked, measured_noise, phase,
    sample_noise, Ciphertext, NoiseTag, PublicKey, SecretKey,
};
pub use params::{ell_for, PfheParams, Sampler};
