use crate::error::ParamError;
use crate::modring::Modulus;

/// Shape of the fresh-noise distribution. Both are hard-bounded by `β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Sampler {
    /// Rejection-sampled discrete Gaussian with `σ = β/6`, cut off at `|e| ≤ β`.
    #[default]
    Gaussian,
    /// Centered binomial with `η = β`.
    Binomial,
}

/// Lattice parameters of the GSW instantiation.
///
/// `L = ⌈log2 q⌉` and `h = (g+1)·L` are derived, so the gadget matrix and
/// every ciphertext share the shape `(g+1) × h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PfheParams {
    pub g: usize,
    pub q: Modulus,
    pub beta: u64,
    pub ell: usize,
    pub sampler: Sampler,
}

/// Message-bit count for a universe of size `n`: `max(1, ⌈log2 n⌉)`.
pub fn ell_for(n: u64) -> usize {
    if n <= 2 {
        1
    } else {
        (64 - (n - 1).leading_zeros()) as usize
    }
}

impl PfheParams {
    pub fn new(g: usize, q: Modulus, beta: u64, ell: usize) -> Result<Self, ParamError> {
        let p = PfheParams {
            g,
            q,
            beta,
            ell,
            sampler: Sampler::Gaussian,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters for a universe of size `n`.
    pub fn for_universe(n: u64, g: usize, q: Modulus, beta: u64) -> Result<Self, ParamError> {
        Self::new(g, q, beta, ell_for(n))
    }

    pub fn with_sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.ell == 0 {
            return Err(ParamError::new("message-bit count ℓ must be ≥ 1"));
        }
        if self.ell > 63 {
            return Err(ParamError::new("message-bit count ℓ must be ≤ 63"));
        }
        Ok(())
    }

    /// Gadget digits per row, `⌈log2 q⌉`.
    pub fn digits(&self) -> usize {
        self.q.bits() as usize
    }

    /// Ciphertext column count `h = (g+1)·L`.
    pub fn h(&self) -> usize {
        (self.g + 1) * self.digits()
    }

    pub fn rows(&self) -> usize {
        self.g + 1
    }

    /// Noise bound of a fresh encryption: `h·β`.
    pub fn fresh_noise_bound(&self) -> u128 {
        self.h() as u128 * self.beta as u128
    }

    /// Noise bound after evaluating a point circuit: `ℓ·h²·β`.
    pub fn eval_noise_bound(&self) -> u128 {
        let h = self.h() as u128;
        self.ell as u128 * h * h * self.beta as u128
    }

    /// Checks `q ≥ 8·(n·N)·E_eval·k·N`, the modulus condition under which
    /// sketches of admissible streams decode exactly.
    pub fn check_stream_modulus(&self, n: u64, k: u64, bound: u64) -> Result<(), ParamError> {
        let need = required_modulus(n, k, bound, self.eval_noise_bound());
        match need {
            Some(need) if (self.q.value() as u128) >= need => Ok(()),
            Some(need) => Err(ParamError::new(format!(
                "q ≥ 8·(n·N)·E_eval·k·N fails: q = {} < {} (n={n}, k={k}, N={bound}, E_eval={})",
                self.q.value(),
                need,
                self.eval_noise_bound()
            ))),
            None => Err(ParamError::new(
                "q ≥ 8·(n·N)·E_eval·k·N fails: right-hand side overflows 128 bits",
            )),
        }
    }

    /// Smallest power-of-two `q ≤ 2^62` meeting the stream modulus condition.
    pub fn auto(n: u64, k: u64, bound: u64, g: usize, beta: u64) -> Result<Self, ParamError> {
        let ell = ell_for(n);
        for bits in 2..=62u32 {
            let q = Modulus::pow2(bits).expect("bits in range");
            let p = PfheParams::new(g, q, beta, ell)?;
            if p.check_stream_modulus(n, k, bound).is_ok() {
                return Ok(p);
            }
        }
        Err(ParamError::new(format!(
            "q ≥ 8·(n·N)·E_eval·k·N has no power-of-two solution below 2^63 (n={n}, k={k}, N={bound}, g={g}, β={beta})"
        )))
    }
}

fn required_modulus(n: u64, k: u64, bound: u64, e_eval: u128) -> Option<u128> {
    8u128
        .checked_mul(n as u128)?
        .checked_mul(bound as u128)?
        .checked_mul(e_eval)?
        .checked_mul(k.max(1) as u128)?
        .checked_mul(bound as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_values() {
        assert_eq!(ell_for(1), 1);
        assert_eq!(ell_for(2), 1);
        assert_eq!(ell_for(4), 2);
        assert_eq!(ell_for(5), 3);
        assert_eq!(ell_for(1024), 10);
        assert_eq!(ell_for(1 << 16), 16);
    }

    #[test]
    fn derived_shape() {
        let p = PfheParams::new(1, Modulus::new(8).unwrap(), 1, 1).unwrap();
        assert_eq!(p.digits(), 3);
        assert_eq!(p.h(), 6);
        assert_eq!(p.eval_noise_bound(), 36);
    }

    #[test]
    fn auto_modulus_is_minimal() {
        let p = PfheParams::auto(1024, 16, 1000, 8, 6).unwrap();
        assert!(p.check_stream_modulus(1024, 16, 1000).is_ok());
        let smaller = PfheParams::new(8, Modulus::pow2(p.q.bits() - 1).unwrap(), 6, 10).unwrap();
        assert!(smaller.check_stream_modulus(1024, 16, 1000).is_err());
    }

    #[test]
    fn violation_names_inequality() {
        let p = PfheParams::new(2, Modulus::pow2(20).unwrap(), 6, 4).unwrap();
        let err = p.check_stream_modulus(16, 2, 3).unwrap_err();
        assert!(err.0.contains("q ≥ 8·(n·N)·E_eval·k·N"));
        assert!(PfheParams::auto(1 << 20, 1 << 10, 1 << 20, 64, 64).is_err());
    }
}
