//! Model parameters: Planck's constant h = 1/N plus numerical tolerances.

use crate::error::{BakerError, Result};
use std::f64::consts::PI;

pub const DEFAULT_AMP_EPSILON: f64 = 1e-15;
pub const DEFAULT_KERNEL_TOL: f64 = 1e-14;

/// Fixed data of one quantization: the dimension N (h = 1/N) and the
/// numerical tolerances used when pruning amplitudes and truncating the
/// Gaussian kernel tail. ħ is derived on demand as 1/(2πN).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub n: u32,
    pub amp_epsilon: f64,
    pub kernel_tol: f64,
}

impl ModelParams {
    pub fn new(n: u32) -> Result<Self> {
        Self::with_tolerances(n, DEFAULT_AMP_EPSILON, DEFAULT_KERNEL_TOL)
    }

    pub fn with_tolerances(n: u32, amp_epsilon: f64, kernel_tol: f64) -> Result<Self> {
        if n < 1 {
            return Err(BakerError::InvalidParams("N must be >= 1".into()));
        }
        if !(amp_epsilon > 0.0 && amp_epsilon < 1.0) {
            return Err(BakerError::InvalidParams(format!(
                "amp_epsilon must lie in (0, 1), got {amp_epsilon}"
            )));
        }
        if !(kernel_tol > 0.0 && kernel_tol < 1.0) {
            return Err(BakerError::InvalidParams(format!(
                "kernel_tol must lie in (0, 1), got {kernel_tol}"
            )));
        }
        Ok(Self { n, amp_epsilon, kernel_tol })
    }

    pub fn hbar(&self) -> f64 {
        1.0 / (2.0 * PI * self.n as f64)
    }

    /// Truncation radius for the kernel form: smallest integer R with
    /// exp(-(πN/2) R²) below `kernel_tol`.
    pub fn truncation_radius(&self) -> i64 {
        let r = (2.0 * (1.0 / self.kernel_tol).ln() / (PI * self.n as f64)).sqrt();
        r.ceil() as i64
    }
}
