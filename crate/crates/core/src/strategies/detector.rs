use serde::{Deserialize, Serialize};

use crate::error::{check_contestants, check_unit, Result};

/// Independent per-party detectors, each firing with probability `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    sigma: f64,
    contestants: usize,
}

impl DetectorModel {
    pub fn new(sigma: f64, contestants: usize) -> Result<Self> {
        check_unit("sigma", sigma)?;
        check_contestants(contestants)?;
        Ok(Self { sigma, contestants })
    }

    pub fn from_eta(eta: f64, contestants: usize) -> Result<Self> {
        Self::new(sigma_from_eta(eta, contestants)?, contestants)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn contestants(&self) -> usize {
        self.contestants
    }

    /// Probability that all `c` detectors fire together.
    pub fn eta(&self) -> f64 {
        self.sigma.powi(self.contestants as i32)
    }
}

/// `η = σ^c`.
pub fn eta_from_sigma(sigma: f64, c: usize) -> Result<f64> {
    check_unit("sigma", sigma)?;
    check_contestants(c)?;
    Ok(sigma.powi(c as i32))
}

/// `σ = η^{1/c}`.
pub fn sigma_from_eta(eta: f64, c: usize) -> Result<f64> {
    check_unit("eta", eta)?;
    check_contestants(c)?;
    Ok(eta.powf(1.0 / c as f64))
}

/// Winning probability of the unmodified protocol when every round is
/// played and rounds without a joint detection are a coin toss.
pub fn p_exp_original(eta: f64) -> Result<f64> {
    check_unit("eta", eta)?;
    Ok(eta + (1.0 - eta) / 2.0)
}
