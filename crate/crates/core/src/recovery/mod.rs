//! Deterministic relaxed k-sparse recovery: a `2k × n` Vandermonde sketch
//! over `Z_p` decoded like a Reed–Solomon syndrome. Exact on k-sparse
//! inputs, unconstrained (but self-checking) otherwise.

mod decode;
mod params;
mod sparse;
mod state;

pub use decode::{berlekamp_massey, decode_syndromes, locate_support, solve_values, DecodeFailure};
pub use params::RecoveryParams;
pub use sparse::SparseVector;
pub use state::{measure_sparse, syndromes_of, syndromes_of_entries, RecoveryOps, SyndromeState};
