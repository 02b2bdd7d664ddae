//! Gadget matrix `G`, its binary inverse `G⁻¹`, and the fused product
//! `X · G⁻¹(Y)` that drives homomorphic multiplication.

use super::{ModMatrix, Modulus};
use crate::error::ArithError;

/// Block-diagonal `(g+1) × (g+1)·L` matrix whose blocks are `(1, 2, …, 2^{L-1})`.
pub fn gadget_matrix(g: usize, q: Modulus) -> ModMatrix {
    let l = q.bits() as usize;
    let rows = g + 1;
    let mut out = ModMatrix::zeros(rows, rows * l, q);
    for r in 0..rows {
        for j in 0..l {
            out.set(r, r * l + j, 1u64 << j);
        }
    }
    out
}

/// Bit decomposition: the `{0,1}` matrix `D` with `G · D = C`.
///
/// Row `r·L + j` of `D` holds bit `j` of row `r` of `C`.
pub fn bit_decompose(c: &ModMatrix) -> ModMatrix {
    let q = c.modulus();
    let l = q.bits() as usize;
    let mut out = ModMatrix::zeros(c.rows() * l, c.cols(), q);
    for r in 0..c.rows() {
        for (col, &v) in c.row(r).iter().enumerate() {
            for j in 0..l {
                if (v >> j) & 1 == 1 {
                    out.set(r * l + j, col, 1);
                }
            }
        }
    }
    out
}

const WINDOW: usize = 8;

/// `x · bit_decompose(y)` without materializing the decomposition.
///
/// For every row of `x` and every block of `L` columns, the sums of
/// `x`-entries selected by each 8-bit window of a `y` entry are tabulated
/// once, so each output entry costs `(g+1)·⌈L/8⌉` lookups instead of
/// `(g+1)·L` multiply-adds.
pub fn gadget_product(x: &ModMatrix, y: &ModMatrix) -> Result<ModMatrix, ArithError> {
    let q = x.modulus();
    if y.modulus() != q {
        return Err(ArithError::ModulusMismatch(q.value(), y.modulus().value()));
    }
    let l = q.bits() as usize;
    let blocks = y.rows();
    if x.cols() != blocks * l {
        return Err(ArithError::DimensionMismatch(
            x.rows(),
            x.cols(),
            blocks * l,
            y.cols(),
        ));
    }
    let windows = l.div_ceil(WINDOW);
    let cols = y.cols();
    let mut tables = vec![0u64; blocks * windows * 256];
    let mut out = Vec::with_capacity(x.rows() * cols);
    let mask = if q.is_pow2() { q.value() - 1 } else { u64::MAX };

    for a in 0..x.rows() {
        let xrow = x.row(a);
        for blk in 0..blocks {
            for w in 0..windows {
                let base = (blk * windows + w) * 256;
                let lo = w * WINDOW;
                let width = WINDOW.min(l - lo);
                let t = &mut tables[base..base + 256];
                t[0] = 0;
                for v in 1..(1usize << width) {
                    let low = v.trailing_zeros() as usize;
                    let prev = t[v & (v - 1)];
                    let add = xrow[blk * l + lo + low];
                    t[v] = if q.is_pow2() {
                        prev.wrapping_add(add) & mask
                    } else {
                        q.add(prev, add)
                    };
                }
            }
        }
        for c in 0..cols {
            if q.is_pow2() {
                let mut acc = 0u64;
                for blk in 0..blocks {
                    let v = y.get(blk, c);
                    let tb = &tables[blk * windows * 256..(blk + 1) * windows * 256];
                    for w in 0..windows {
                        acc = acc.wrapping_add(tb[w * 256 + ((v >> (w * WINDOW)) & 0xff) as usize]);
                    }
                }
                out.push(acc & mask);
            } else {
                let mut acc = 0u128;
                for blk in 0..blocks {
                    let v = y.get(blk, c);
                    let tb = &tables[blk * windows * 256..(blk + 1) * windows * 256];
                    for w in 0..windows {
                        acc += tb[w * 256 + ((v >> (w * WINDOW)) & 0xff) as usize] as u128;
                    }
                }
                out.push(q.reduce_u128(acc));
            }
        }
    }
    ModMatrix::from_vec(x.rows(), cols, out, q)
}
