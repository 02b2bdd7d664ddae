//! Exact modular arithmetic: residues, dense matrices, the gadget toolkit
//! and polynomials over the syndrome field.

mod gadget;
mod matrix;
mod modulus;
pub mod poly;

pub use gadget::{bit_decompose, gadget_matrix, gadget_product};
pub use matrix::ModMatrix;
pub use modulus::{centered, is_prime, next_prime_above, Modulus, MAX_MODULUS};
pub use poly::{poly_multipoint_eval, weighted_power_sums, PolyP};
