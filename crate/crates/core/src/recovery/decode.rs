//! Syndrome decoding: Berlekamp–Massey locator synthesis, support search,
//! value solve and self-verification.

use std::fmt;

use super::{RecoveryParams, SparseVector};
use crate::modring::poly::{horner, poly_multipoint_eval_counted};
use crate::modring::{Modulus, PolyP};
use crate::pfhe::ell_for;

/// Why the syndromes do not come from a k-sparse vector with entries in `[-N, N]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeFailure {
    /// Linear complexity of the syndrome sequence exceeds `k`.
    TooManyTerms(usize),
    /// The locator does not split into distinct roots `j⁻¹`, `j ∈ [n]`.
    RootsMissing { expected: usize, found: usize },
    /// The value system is singular.
    Singular,
    /// A decoded value is zero or exceeds `N` in magnitude.
    ValueOutOfRange(i64),
    /// The candidate's syndromes differ from the input.
    SyndromeMismatch,
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeFailure::TooManyTerms(l) => write!(f, "locator degree {l} exceeds k"),
            DecodeFailure::RootsMissing { expected, found } => {
                write!(f, "locator has {found} roots in range, expected {expected}")
            }
            DecodeFailure::Singular => write!(f, "singular value system"),
            DecodeFailure::ValueOutOfRange(v) => write!(f, "decoded value {v} out of range"),
            DecodeFailure::SyndromeMismatch => write!(f, "recomputed syndromes mismatch"),
        }
    }
}

/// Shortest LFSR `C(z) = 1 + c_1 z + …` generating `s`, with its length `L`.
pub fn berlekamp_massey(p: &Modulus, s: &[u64], ops: &mut u64) -> (Vec<u64>, usize) {
    let mut c = vec![1u64];
    let mut b = vec![1u64];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last_d = 1u64;
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=l.min(c.len() - 1) {
            d = p.add(d, p.mul(c[i], s[n - i]));
        }
        *ops += l as u64;
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = p.mul(d, p.inv(last_d).expect("nonzero discrepancy"));
        *ops += 1;
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, 0);
        }
        for (i, &bv) in b.iter().enumerate() {
            c[i + shift] = p.sub(c[i + shift], p.mul(coef, bv));
        }
        *ops += b.len() as u64;
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last_d = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    c.truncate(l + 1);
    (c, l)
}

/// Indices `j ∈ [n]` with `Λ(j⁻¹) = 0`, ascending.
///
/// Evaluates the reversed locator `z^L·Λ(1/z)`, whose roots are the `j`
/// themselves: a full remainder-tree sweep over `1..=n` when
/// `n ≤ 4k·⌈log2 n⌉`, otherwise one Horner evaluation per candidate.
pub fn locate_support(
    params: &RecoveryParams,
    locator: &[u64],
    l: usize,
    ops: &mut u64,
) -> Vec<u64> {
    let p = &params.p;
    let mut rev = vec![0u64; l + 1];
    for (i, &c) in locator.iter().enumerate().take(l + 1) {
        rev[l - i] = c;
    }
    let n = params.n;
    if n <= 4 * params.k as u64 * ell_for(n) as u64 {
        let points: Vec<u64> = (1..=n).collect();
        let values = poly_multipoint_eval_counted(p, &PolyP::new(rev), &points, ops);
        points
            .into_iter()
            .zip(values)
            .filter(|&(_, v)| v == 0)
            .map(|(j, _)| j)
            .collect()
    } else {
        (1..=n).filter(|&j| horner(p, &rev, j, ops) == 0).collect()
    }
}

/// Solves `Σ_c v_c · j_c^r = s_{r+1}` for `r < |support|` by Gaussian elimination.
pub fn solve_values(
    p: &Modulus,
    support: &[u64],
    syndromes: &[u64],
    ops: &mut u64,
) -> Option<Vec<u64>> {
    let m = support.len();
    let mut a: Vec<Vec<u64>> = (0..m)
        .map(|r| {
            let mut row: Vec<u64> = support.iter().map(|&j| p.pow(j, r as u64)).collect();
            row.push(syndromes[r]);
            row
        })
        .collect();
    *ops += (m * m) as u64;
    for col in 0..m {
        let pivot = (col..m).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        let inv = p.inv(a[col][col]).ok()?;
        for v in a[col].iter_mut() {
            *v = p.mul(*v, inv);
        }
        for r in 0..m {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                let (src, dst) = if r < col {
                    let (lo, hi) = a.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (d, &s) in dst.iter_mut().zip(src.iter()) {
                    *d = p.sub(*d, p.mul(f, s));
                }
            }
        }
        *ops += ((m + 1) * (m + 1)) as u64;
    }
    Some(a.into_iter().map(|row| row[m]).collect())
}

/// Naive `Σ_j v_j · j^r` for `r < count`.
pub(crate) fn syndromes_of_sparse(
    p: &Modulus,
    x: &[(u64, i64)],
    count: usize,
    ops: &mut u64,
) -> Vec<u64> {
    let mut s = vec![0u64; count];
    for &(j, v) in x {
        let mut pw = 1u64;
        let w = p.from_i64(v);
        for sr in s.iter_mut() {
            *sr = p.add(*sr, p.mul(w, pw));
            pw = p.mul(pw, j);
        }
        *ops += 2 * count as u64;
    }
    s
}

/// Decodes `2k` syndromes to the unique k-sparse vector with entries in
/// `[-N, N]` that produces them, or reports why none exists.
pub fn decode_syndromes(
    params: &RecoveryParams,
    syndromes: &[u64],
    ops: &mut u64,
) -> Result<SparseVector, DecodeFailure> {
    let p = &params.p;
    if syndromes.iter().all(|&s| s == 0) {
        return Ok(SparseVector::empty());
    }
    let (locator, l) = berlekamp_massey(p, syndromes, ops);
    if l > params.k {
        return Err(DecodeFailure::TooManyTerms(l));
    }
    let support = locate_support(params, &locator, l, ops);
    if support.len() != l {
        return Err(DecodeFailure::RootsMissing {
            expected: l,
            found: support.len(),
        });
    }
    let values = solve_values(p, &support, syndromes, ops).ok_or(DecodeFailure::Singular)?;
    let mut entries = Vec::with_capacity(l);
    for (&j, &v) in support.iter().zip(&values) {
        let v = p.centered(v);
        if v == 0 || v.unsigned_abs() > params.bound {
            return Err(DecodeFailure::ValueOutOfRange(v));
        }
        entries.push((j, v));
    }
    if syndromes_of_sparse(p, &entries, syndromes.len(), ops) != syndromes {
        return Err(DecodeFailure::SyndromeMismatch);
    }
    Ok(SparseVector::from_entries(entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bm_finds_geometric_sum() {
        // s_r = 2^r + 3^r has locator (1-2z)(1-3z) = 1 - 5z + 6z^2
        let p = Modulus::new(97).unwrap();
        let (c, l) = berlekamp_massey(&p, &[2, 5, 13, 35], &mut 0);
        assert_eq!(l, 2);
        assert_eq!(c, vec![1, 97 - 5, 6]);
    }

    #[test]
    fn decodes_single_term_by_brute_force() {
        let params = RecoveryParams::with_prime(40, 1, 40, 97).unwrap();
        // brute force: the 1-sparse vectors mod 97 whose syndromes are (5, 15)
        let mut hits = Vec::new();
        for j in 1..=40u64 {
            for v in -40i64..=40 {
                if v != 0 && syndromes_of_sparse(&params.p, &[(j, v)], 2, &mut 0) == [5, 15] {
                    hits.push((j, v));
                }
            }
        }
        assert_eq!(hits, vec![(3, 5)]);
        let got = decode_syndromes(&params, &[5, 15], &mut 0).unwrap();
        assert_eq!(got.entries(), hits.as_slice());
    }

    #[test]
    fn zero_syndromes_decode_to_empty() {
        let params = RecoveryParams::new(64, 3, 10).unwrap();
        assert!(decode_syndromes(&params, &[0; 6], &mut 0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn three_terms_with_k1_fail() {
        let params = RecoveryParams::new(64, 1, 10).unwrap();
        // s_1 = 0, s_2 ≠ 0 forces a degree-2 locator
        let s = syndromes_of_sparse(&params.p, &[(1, 1), (2, 1), (3, -2)], 2, &mut 0);
        assert_eq!(
            decode_syndromes(&params, &s, &mut 0),
            Err(DecodeFailure::TooManyTerms(2))
        );
        // other dense inputs may alias a 1-sparse vector; it must then be consistent
        let s = syndromes_of_sparse(&params.p, &[(1, 1), (2, 1), (3, 1)], 2, &mut 0);
        let got = decode_syndromes(&params, &s, &mut 0).unwrap();
        assert_eq!(got.entries(), &[(2, 3)]);
    }

    #[test]
    fn both_root_search_paths_agree() {
        let sweep = RecoveryParams::new(40, 4, 50).unwrap();
        let check = RecoveryParams::new(4000, 4, 50).unwrap();
        for params in [sweep, check] {
            let x = [(2u64, 7i64), (9, -50), (17, 1), (40, 3)];
            let s = syndromes_of_sparse(&params.p, &x, 8, &mut 0);
            assert_eq!(decode_syndromes(&params, &s, &mut 0).unwrap().entries(), &x);
        }
    }
}
