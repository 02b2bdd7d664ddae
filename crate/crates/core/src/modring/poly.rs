//! Dense univariate polynomials over a prime field: Karatsuba products,
//! Newton power-series inversion, fast division, subproduct trees and
//! remainder-tree multipoint evaluation, and weighted power sums.
//!
//! Every routine that multiplies field elements has a `*_counted` form
//! that adds the number of field multiplications to a caller-owned counter.

use std::collections::HashSet;

use super::Modulus;
use crate::error::ArithError;

/// Operand length at or below which products use the schoolbook method.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// Polynomial over `Z_p`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyP {
    coeffs: Vec<u64>,
}

impl PolyP {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        trim(&mut coeffs);
        PolyP { coeffs }
    }

    pub fn zero() -> Self {
        PolyP::default()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, p: &Modulus, x: u64) -> u64 {
        horner(p, &self.coeffs, x, &mut 0)
    }
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn horner(p: &Modulus, f: &[u64], x: u64, ops: &mut u64) -> u64 {
    let mut acc = 0;
    for &c in f.iter().rev() {
        acc = p.add(p.mul(acc, x), c);
    }
    *ops += f.len() as u64;
    acc
}

fn add_into(p: &Modulus, acc: &mut Vec<u64>, b: &[u64], shift: usize) {
    if acc.len() < b.len() + shift {
        acc.resize(b.len() + shift, 0);
    }
    for (i, &v) in b.iter().enumerate() {
        acc[i + shift] = p.add(acc[i + shift], v);
    }
}

fn sub_into(p: &Modulus, acc: &mut [u64], b: &[u64]) {
    for (a, &v) in acc.iter_mut().zip(b) {
        *a = p.sub(*a, v);
    }
}

fn schoolbook(p: &Modulus, a: &[u64], b: &[u64], ops: &mut u64) -> Vec<u64> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    let pv = p.value() as u128;
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            // p < 2^62, so the running sum is reduced before it can overflow
            let t = out[i + j] + x as u128 * y as u128;
            out[i + j] = if t >= 1u128 << 126 { t % pv } else { t };
        }
    }
    *ops += (a.len() * b.len()) as u64;
    out.into_iter().map(|x| (x % pv) as u64).collect()
}

/// Product of two coefficient slices (untrimmed result of length `|a|+|b|-1`).
pub fn poly_mul_counted(p: &Modulus, a: &[u64], b: &[u64], ops: &mut u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.len() <= KARATSUBA_THRESHOLD {
        return schoolbook(p, short, long, ops);
    }
    if long.len() >= 2 * short.len() {
        // unbalanced: slice the long operand into short-sized pieces
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (k, chunk) in long.chunks(short.len()).enumerate() {
            let part = poly_mul_counted(p, short, chunk, ops);
            for (i, v) in part.into_iter().enumerate() {
                let idx = k * short.len() + i;
                out[idx] = p.add(out[idx], v);
            }
        }
        return out;
    }
    karatsuba(p, short, long, ops)
}

fn karatsuba(p: &Modulus, a: &[u64], b: &[u64], ops: &mut u64) -> Vec<u64> {
    let half = a.len().max(b.len()).div_ceil(2);
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    let z0 = poly_mul_counted(p, a0, b0, ops);
    let z2 = poly_mul_counted(p, a1, b1, ops);
    let mut sa = a0.to_vec();
    add_into(p, &mut sa, a1, 0);
    let mut sb = b0.to_vec();
    add_into(p, &mut sb, b1, 0);
    let mut z1 = poly_mul_counted(p, &sa, &sb, ops);
    sub_into(p, &mut z1, &z0);
    sub_into(p, &mut z1, &z2);

    let mut out = vec![0u64; a.len() + b.len() - 1];
    add_into(p, &mut out, &z0, 0);
    add_into(p, &mut out, &z1, half);
    add_into(p, &mut out, &z2, 2 * half);
    out.truncate(a.len() + b.len() - 1);
    out
}

pub fn poly_mul(p: &Modulus, a: &PolyP, b: &PolyP) -> PolyP {
    PolyP::new(poly_mul_counted(p, &a.coeffs, &b.coeffs, &mut 0))
}

/// `f⁻¹ mod z^prec` by Newton iteration; `f[0]` must be invertible.
pub fn series_inverse_counted(
    p: &Modulus,
    f: &[u64],
    prec: usize,
    ops: &mut u64,
) -> Result<Vec<u64>, ArithError> {
    let f0 = f.first().copied().unwrap_or(0);
    let mut g = vec![p.inv(f0)?];
    *ops += 1;
    let mut m = 1;
    while m < prec {
        let m2 = (2 * m).min(prec);
        let fm = &f[..f.len().min(m2)];
        let mut e = poly_mul_counted(p, fm, &g, ops);
        e.truncate(m2);
        e.resize(m2, 0);
        // e ← 2 − f·g
        for v in e.iter_mut() {
            *v = p.neg(*v);
        }
        e[0] = p.add(e[0], 2 % p.value());
        let mut next = poly_mul_counted(p, &g, &e, ops);
        next.truncate(m2);
        next.resize(m2, 0);
        g = next;
        m = m2;
    }
    g.truncate(prec);
    Ok(g)
}

/// Quotient and remainder of `a / b` (`b` nonzero with invertible leading term).
pub fn poly_divrem_counted(
    p: &Modulus,
    a: &[u64],
    b: &[u64],
    ops: &mut u64,
) -> Result<(Vec<u64>, Vec<u64>), ArithError> {
    let mut a = a.to_vec();
    trim(&mut a);
    let mut b = b.to_vec();
    trim(&mut b);
    let Some(&lead) = b.last() else {
        return Err(ArithError::NotInvertible {
            value: 0,
            modulus: p.value(),
        });
    };
    if a.len() < b.len() {
        return Ok((Vec::new(), a));
    }
    let qlen = a.len() - b.len() + 1;
    if qlen <= KARATSUBA_THRESHOLD || b.len() <= KARATSUBA_THRESHOLD {
        let inv = p.inv(lead)?;
        *ops += 1;
        let mut quot = vec![0u64; qlen];
        for i in (0..qlen).rev() {
            let c = p.mul(a[i + b.len() - 1], inv);
            *ops += 1;
            quot[i] = c;
            if c != 0 {
                for (j, &bv) in b.iter().enumerate() {
                    a[i + j] = p.sub(a[i + j], p.mul(c, bv));
                }
                *ops += b.len() as u64;
            }
        }
        a.truncate(b.len() - 1);
        trim(&mut a);
        return Ok((quot, a));
    }
    // reversed-series division
    let ra: Vec<u64> = a.iter().rev().take(qlen).copied().collect();
    let rb: Vec<u64> = b.iter().rev().copied().collect();
    let inv = series_inverse_counted(p, &rb, qlen, ops)?;
    let mut rq = poly_mul_counted(p, &ra, &inv, ops);
    rq.truncate(qlen);
    rq.resize(qlen, 0);
    rq.reverse();
    let quot = rq;
    let bq = poly_mul_counted(p, &b, &quot, ops);
    let mut rem: Vec<u64> = a[..b.len() - 1].to_vec();
    sub_into(p, &mut rem, &bq[..b.len() - 1]);
    trim(&mut rem);
    Ok((quot, rem))
}

/// Levels of the subproduct tree over `points`; level 0 holds the linear
/// factors `z − x_i`, the last level holds the full product.
pub fn subproduct_tree(p: &Modulus, points: &[u64], ops: &mut u64) -> Vec<Vec<Vec<u64>>> {
    let mut levels = vec![points
        .iter()
        .map(|&x| vec![p.neg(p.reduce(x)), 1])
        .collect::<Vec<_>>()];
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap();
        let next = prev
            .chunks(2)
            .map(|pair| match pair {
                [l, r] => poly_mul_counted(p, l, r, ops),
                [one] => one.clone(),
                _ => unreachable!(),
            })
            .collect();
        levels.push(next);
    }
    levels
}

/// Evaluates `f` at every point by remainder-tree descent.
pub fn poly_multipoint_eval_counted(
    p: &Modulus,
    f: &PolyP,
    points: &[u64],
    ops: &mut u64,
) -> Vec<u64> {
    if points.is_empty() {
        return Vec::new();
    }
    if f.is_zero() {
        return vec![0; points.len()];
    }
    let tree = subproduct_tree(p, points, ops);
    let top = tree.len() - 1;
    let root = &tree[top][0];
    let mut rems = vec![
        poly_divrem_counted(p, &f.coeffs, root, ops)
            .expect("monic")
            .1,
    ];
    for level in (0..top).rev() {
        let nodes = &tree[level];
        let mut next = Vec::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            let parent = &rems[i / 2];
            next.push(poly_divrem_counted(p, parent, node, ops).expect("monic").1);
        }
        rems = next;
    }
    rems.into_iter()
        .map(|r| r.first().copied().unwrap_or(0))
        .collect()
}

pub fn poly_multipoint_eval(p: &Modulus, f: &PolyP, points: &[u64]) -> Vec<u64> {
    poly_multipoint_eval_counted(p, f, points, &mut 0)
}

/// `s_r = Σ_c w_c · x_c^{r-1}` for `r = 1..=count`: the transposed
/// Vandermonde product.
///
/// Accumulates `Σ_c w_c / (1 − x_c z)` as a single fraction `N/D` by
/// divide and conquer, then expands `N · D⁻¹ mod z^count`.
pub fn weighted_power_sums_counted(
    p: &Modulus,
    points: &[u64],
    weights: &[u64],
    count: usize,
    ops: &mut u64,
) -> Result<Vec<u64>, ArithError> {
    if points.len() != weights.len() {
        return Err(ArithError::LengthMismatch(points.len(), weights.len()));
    }
    let mut seen = HashSet::with_capacity(points.len());
    for &x in points {
        let x = p.reduce(x);
        if x == 0 {
            return Err(ArithError::ZeroPoint);
        }
        if !seen.insert(x) {
            return Err(ArithError::DuplicatePoint(x));
        }
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    if points.is_empty() {
        return Ok(vec![0; count]);
    }
    let (num, den) = fraction(p, points, weights, ops);
    let inv = series_inverse_counted(p, &den[..den.len().min(count)], count, ops)?;
    let num = &num[..num.len().min(count)];
    let mut s = poly_mul_counted(p, num, &inv, ops);
    s.resize(count, 0);
    s.truncate(count);
    Ok(s)
}

fn fraction(p: &Modulus, points: &[u64], weights: &[u64], ops: &mut u64) -> (Vec<u64>, Vec<u64>) {
    if points.len() == 1 {
        return (
            vec![p.reduce(weights[0])],
            vec![1, p.neg(p.reduce(points[0]))],
        );
    }
    let mid = points.len() / 2;
    let (nl, dl) = fraction(p, &points[..mid], &weights[..mid], ops);
    let (nr, dr) = fraction(p, &points[mid..], &weights[mid..], ops);
    let mut num = poly_mul_counted(p, &nl, &dr, ops);
    add_into(p, &mut num, &poly_mul_counted(p, &nr, &dl, ops), 0);
    let den = poly_mul_counted(p, &dl, &dr, ops);
    (num, den)
}

pub fn weighted_power_sums(
    p: &Modulus,
    points: &[u64],
    weights: &[u64],
    count: usize,
) -> Result<Vec<u64>, ArithError> {
    weighted_power_sums_counted(p, points, weights, count, &mut 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(p: u64) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn naive_power_sums(p: &Modulus, pts: &[u64], w: &[u64], count: usize) -> Vec<u64> {
        (0..count)
            .map(|r| {
                pts.iter().zip(w).fold(0, |acc, (&x, &wc)| {
                    p.add(acc, p.mul(wc, p.pow(x, r as u64)))
                })
            })
            .collect()
    }

    fn naive_mul(p: &Modulus, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = p.add(out[i + j], p.mul(x, y));
            }
        }
        out
    }

    #[test]
    fn power_sum_examples() {
        let p = m(97);
        assert_eq!(
            weighted_power_sums(&p, &[2, 3], &[1, 1], 4).unwrap(),
            vec![2, 5, 13, 35]
        );
        assert_eq!(
            weighted_power_sums(&p, &[5], &[7], 4).unwrap(),
            vec![7, 35, 175 % 97, 875 % 97]
        );
        assert_eq!(
            weighted_power_sums(&p, &[2, 2], &[1, 1], 4),
            Err(ArithError::DuplicatePoint(2))
        );
        assert_eq!(
            weighted_power_sums(&p, &[0, 2], &[1, 1], 4),
            Err(ArithError::ZeroPoint)
        );
    }

    #[test]
    fn power_sums_match_naive_double_loop() {
        let p = m(10007);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 1..=64usize {
            let mut all: Vec<u64> = (1..10007).collect();
            all.shuffle(&mut rng);
            let npts = rng.gen_range(0..=2 * k);
            let pts = &all[..npts];
            let w: Vec<u64> = (0..npts).map(|_| rng.gen_range(0..10007)).collect();
            assert_eq!(
                weighted_power_sums(&p, pts, &w, 2 * k).unwrap(),
                naive_power_sums(&p, pts, &w, 2 * k),
                "k={k}"
            );
        }
    }

    #[test]
    fn multipoint_examples() {
        let p = m(97);
        let sq = PolyP::new(vec![0, 0, 1]);
        assert_eq!(poly_multipoint_eval(&p, &sq, &[1, 2, 3]), vec![1, 4, 9]);
        assert_eq!(
            poly_multipoint_eval(&p, &PolyP::zero(), &[1, 5, 9]),
            vec![0, 0, 0]
        );
        assert_eq!(poly_multipoint_eval(&p, &sq, &[]), Vec::<u64>::new());
    }

    #[test]
    fn series_inverse_is_inverse() {
        let p = m(10007);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for prec in [1usize, 2, 7, 33, 100] {
            let mut f: Vec<u64> = (0..prec + 3).map(|_| rng.gen_range(0..10007)).collect();
            f[0] = rng.gen_range(1..10007);
            let g = series_inverse_counted(&p, &f, prec, &mut 0).unwrap();
            let prod = naive_mul(&p, &f, &g);
            assert_eq!(prod[0], 1);
            assert!(prod[1..prec].iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn karatsuba_counts_fewer_than_schoolbook() {
        let p = m(10007);
        let a = vec![3u64; 256];
        let mut ops = 0;
        let fast = poly_mul_counted(&p, &a, &a, &mut ops);
        assert_eq!(fast, naive_mul(&p, &a, &a));
        assert!(ops < 256 * 256 / 2, "ops = {ops}");
    }

    proptest! {
        #[test]
        fn mul_matches_naive(
            a in prop::collection::vec(0u64..10007, 1..150),
            b in prop::collection::vec(0u64..10007, 1..150),
        ) {
            let p = m(10007);
            prop_assert_eq!(poly_mul_counted(&p, &a, &b, &mut 0), naive_mul(&p, &a, &b));
        }

        #[test]
        fn divrem_reconstructs(
            a in prop::collection::vec(0u64..97, 0..120),
            mut b in prop::collection::vec(0u64..97, 1..80),
        ) {
            let p = m(97);
            *b.last_mut().unwrap() = 1 + b.last().unwrap() % 96;
            let (q, r) = poly_divrem_counted(&p, &a, &b, &mut 0).unwrap();
            prop_assert!(r.len() < b.len());
            let mut back = if q.is_empty() { Vec::new() } else { naive_mul(&p, &b, &q) };
            add_into(&p, &mut back, &r, 0);
            let mut a = a.clone();
            trim(&mut a);
            trim(&mut back);
            prop_assert_eq!(back, a);
        }

        #[test]
        fn multipoint_matches_horner(
            f in prop::collection::vec(0u64..10007, 0..257),
            pts in prop::collection::vec(0u64..10007, 0..80),
        ) {
            let p = m(10007);
            let poly = PolyP::new(f);
            let expect: Vec<u64> = pts.iter().map(|&x| poly.eval(&p, x)).collect();
            prop_assert_eq!(poly_multipoint_eval(&p, &poly, &pts), expect);
        }
    }
}
