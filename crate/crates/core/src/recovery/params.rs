use crate::error::ParamError;
use crate::modring::{is_prime, next_prime_above, Modulus};

/// Universe size `n`, sparsity `k`, entry bound `N`, syndrome prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RecoveryParams {
    pub n: u64,
    pub k: usize,
    pub bound: u64,
    pub p: Modulus,
}

impl RecoveryParams {
    /// Picks `p` as the smallest prime exceeding `max(2N+1, n)`.
    pub fn new(n: u64, k: usize, bound: u64) -> Result<Self, ParamError> {
        let floor = (2 * bound as u128 + 1).max(n as u128);
        if floor >= crate::modring::MAX_MODULUS as u128 {
            return Err(ParamError::new("p > max(2N+1, n) does not fit in 62 bits"));
        }
        let p = next_prime_above(floor as u64);
        Self::with_prime(n, k, bound, p)
    }

    pub fn with_prime(n: u64, k: usize, bound: u64, p: u64) -> Result<Self, ParamError> {
        if n == 0 {
            return Err(ParamError::new("n ≥ 1 required"));
        }
        if k == 0 {
            return Err(ParamError::new("k ≥ 1 required"));
        }
        if (k as u64) > n / 2 && !(n == 1 && k == 1) {
            return Err(ParamError::new(format!("k ≤ n/2 fails: k = {k}, n = {n}")));
        }
        if !is_prime(p) {
            return Err(ParamError::new(format!("p prime fails: p = {p}")));
        }
        if p as u128 <= 2 * bound as u128 {
            return Err(ParamError::new(format!(
                "p > 2N fails: p = {p}, N = {bound}"
            )));
        }
        if p <= n {
            return Err(ParamError::new(format!("p > n fails: p = {p}, n = {n}")));
        }
        let p = Modulus::new(p).map_err(|e| ParamError::new(e.to_string()))?;
        Ok(RecoveryParams { n, k, bound, p })
    }

    /// Number of syndromes, `2k`.
    pub fn rows(&self) -> usize {
        2 * self.k
    }

    pub fn check_index(&self, i: u64) -> Result<(), crate::error::RecoveryError> {
        if i == 0 || i > self.n {
            return Err(crate::error::RecoveryError::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_selection() {
        assert_eq!(RecoveryParams::new(1024, 16, 1000).unwrap().p.value(), 2003);
        assert_eq!(RecoveryParams::new(16, 2, 3).unwrap().p.value(), 17);
        assert_eq!(RecoveryParams::new(4, 1, 100).unwrap().p.value(), 211);
    }

    #[test]
    fn violations() {
        assert!(RecoveryParams::with_prime(10, 1, 3, 91)
            .unwrap_err()
            .0
            .contains("prime"));
        assert!(RecoveryParams::with_prime(10, 1, 50, 97)
            .unwrap_err()
            .0
            .contains("p > 2N"));
        assert!(RecoveryParams::with_prime(100, 1, 3, 97)
            .unwrap_err()
            .0
            .contains("p > n"));
        assert!(RecoveryParams::with_prime(10, 6, 3, 97)
            .unwrap_err()
            .0
            .contains("k ≤ n/2"));
    }
}
