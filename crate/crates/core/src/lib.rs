//! White-box adversarially robust k-sparse recovery over integer streams.
//!
//! A deterministic Vandermonde-syndrome decoder proposes a candidate; a
//! GSW-style homomorphic hash of the stream accepts or rejects it. The
//! hash key is sampled uniformly from a public seed, so an adversary that
//! sees every bit of state still cannot steer the decoder into a wrong
//! answer that the hash accepts.
//!
//! Layout:
//! - [`modring`]: residues, matrices, gadget decomposition, polynomials
//! - [`pfhe`]: keys, encryption, digests, point-circuit evaluation, linear decoding
//! - [`recovery`]: syndrome sketch and Berlekamp–Massey decoder
//! - [`stream`]: the verified streaming algorithm and its trace format
//! - [`dist`]: coordinator-model protocol, wire codec and transports
//! - [`adversary`]: the white-box game, attack strategies and hybrid checks

pub mod adversary;
pub mod dist;
pub mod error;
pub mod exec;
pub mod modring;
pub mod pfhe;
pub mod recovery;
pub mod stream;

pub use error::{ArithError, ParamError, PfheError, RecoveryError, StreamError};
pub use exec::Exec;
