//! Resampling hyper-parameters.

use crate::error::{Error, Result};

/// The pair `(m, q)`: total sample count (original plus alternatives) and
/// the rank threshold of the confidence region. The lower rank bound is
/// fixed to 1, so the nominal coverage probability is `q / m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperParams {
    m: usize,
    q: usize,
}

impl HyperParams {
    /// Requires `m >= 2` and `1 <= q <= m`. `q == m` is accepted (the
    /// region then has coverage 1) but logged as a warning because the
    /// consistency guarantee needs `q < m`.
    pub fn new(m: usize, q: usize) -> Result<Self> {
        if m < 2 || q < 1 || q > m {
            return Err(Error::InvalidHyperParams { m, q });
        }
        if q == m {
            log::warn!("q == m makes the region all of Theta; consistency needs q < m");
        }
        Ok(Self { m, q })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Nominal coverage probability `q / m`.
    pub fn nominal_coverage(&self) -> f64 {
        self.q as f64 / self.m as f64
    }
}
