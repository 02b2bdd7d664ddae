use crate::error::ParamError;
use crate::pfhe::{ell_for, PfheParams};
use crate::recovery::RecoveryParams;

/// Universe size `n`, sparsity `k`, entry bound `N` and both sub-schemes'
/// parameters, cross-checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamParams {
    pub n: u64,
    pub k: usize,
    pub bound: u64,
    pub pfhe: PfheParams,
    pub recovery: RecoveryParams,
}

impl StreamParams {
    pub fn new(n: u64, k: usize, bound: u64, pfhe: PfheParams) -> Result<Self, ParamError> {
        let recovery = RecoveryParams::new(n, k, bound)?;
        Self::with_recovery(pfhe, recovery)
    }

    pub fn with_recovery(pfhe: PfheParams, recovery: RecoveryParams) -> Result<Self, ParamError> {
        let RecoveryParams { n, k, bound, .. } = recovery;
        pfhe.validate()?;
        if pfhe.ell != ell_for(n) {
            return Err(ParamError::new(format!(
                "ℓ = ⌈log2 n⌉ fails: ℓ = {}, n = {n}",
                pfhe.ell
            )));
        }
        if bound == 0 {
            return Err(ParamError::new("N ≥ 1 required"));
        }
        pfhe.check_stream_modulus(n, k as u64, bound)?;
        Ok(StreamParams {
            n,
            k,
            bound,
            pfhe,
            recovery,
        })
    }

    /// Auto-sized `q`: the smallest power of two meeting the modulus condition.
    pub fn auto(n: u64, k: usize, bound: u64, g: usize, beta: u64) -> Result<Self, ParamError> {
        let recovery = RecoveryParams::new(n, k, bound)?;
        Self::with_recovery(PfheParams::auto(n, k as u64, bound, g, beta)?, recovery)
    }
}
