use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::TraceRecord;

/// A random turnstile stream over `[n]` of at most `updates` updates whose
/// accumulated vector has exactly `support` nonzeros.
///
/// Random inserts and deletes hit the final support plus a pool of decoy
/// coordinates; a closing pass (in random order) sets every touched
/// coordinate to its final value. Every prefix stays within `[-bound, bound]`.
pub fn random_stream<R: Rng + ?Sized>(
    rng: &mut R,
    n: u64,
    bound: u64,
    updates: usize,
    support: usize,
) -> Vec<TraceRecord> {
    assert!(support as u64 <= n && bound >= 1);
    let bound = bound.min(i64::MAX as u64 / 4) as i64;
    let decoys = (n as usize - support).min(2 * support + 8);
    let picked = rand::seq::index::sample(rng, n as usize, support + decoys);
    let pool: Vec<u64> = picked.iter().map(|i| i as u64 + 1).collect();
    let mut target = BTreeMap::new();
    for &i in &pool[..support] {
        target.insert(i, nonzero(rng, bound));
    }
    let mut x: BTreeMap<u64, i64> = BTreeMap::new();
    let mut out = Vec::with_capacity(updates);
    let random_steps = updates.saturating_sub(pool.len());
    for _ in 0..random_steps {
        let i = pool[rng.gen_range(0..pool.len())];
        let cur = x.get(&i).copied().unwrap_or(0);
        let d = if cur != 0 && rng.gen_bool(0.3) {
            -cur
        } else {
            let v = loop {
                let v = rng.gen_range(-bound..=bound);
                if v != cur {
                    break v;
                }
            };
            v - cur
        };
        x.insert(i, cur + d);
        out.push(TraceRecord::Update(i, d));
    }
    let mut closing: Vec<TraceRecord> = pool
        .iter()
        .filter_map(|i| {
            let cur = x.get(i).copied().unwrap_or(0);
            let want = target.get(i).copied().unwrap_or(0);
            (cur != want).then_some(TraceRecord::Update(*i, want - cur))
        })
        .collect();
    closing.shuffle(rng);
    out.extend(closing);
    out
}

fn nonzero<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

/// Dense accumulation of the updates in `records`; `x[0]` is index 1.
pub fn accumulate(records: &[TraceRecord], n: u64) -> Vec<i64> {
    let mut x = vec![0i64; n as usize];
    for r in records {
        if let TraceRecord::Update(i, d) = *r {
            x[(i - 1) as usize] += d;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn final_support_and_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, s, u) in [
            (1024u64, 16usize, 5000usize),
            (64, 0, 100),
            (16, 3, 5),
            (40, 17, 300),
        ] {
            let t = random_stream(&mut rng, n, 7, u, s);
            assert!(t.len() <= u.max(3 * s + 8));
            let x = accumulate(&t, n);
            assert_eq!(x.iter().filter(|&&v| v != 0).count(), s);
            let mut run = vec![0i64; n as usize];
            for r in &t {
                let TraceRecord::Update(i, d) = *r else {
                    panic!()
                };
                run[(i - 1) as usize] += d;
                assert!(run[(i - 1) as usize].abs() <= 7);
            }
        }
    }
}
