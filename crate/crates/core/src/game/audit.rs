use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::assignment::enumerate_variations;
use super::engine::Transcript;
use crate::error::{Error, Result};

/// Per-variation counts over played rounds and a chi-square test against
/// the uniform distribution on the integer-total variations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub contestants: usize,
    pub played: usize,
    /// Indexed like [`enumerate_variations`].
    pub counts: Vec<u64>,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    /// Upper-tail probability of `chi_square`.
    pub p_value: f64,
}

impl BalanceReport {
    pub fn expected(&self) -> f64 {
        self.played as f64 / self.counts.len() as f64
    }

    /// Variation indices observed at least `factor` times more often than uniform.
    pub fn over_represented(&self, factor: f64) -> Vec<usize> {
        let e = self.expected();
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &k)| k as f64 >= factor * e)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn consistent_with_uniform(&self, level: f64) -> bool {
        self.p_value > level
    }
}

pub fn balance_audit(transcript: &Transcript) -> Result<BalanceReport> {
    let c = transcript.config.contestants;
    let mut counts = vec![0u64; enumerate_variations(c)?.len()];
    for r in transcript.played() {
        let a = r.deal.assignment().expect("played rounds have integer totals");
        counts[a.variation_index()] += 1;
    }
    BalanceReport::from_counts(c, counts)
}

impl BalanceReport {
    /// Chi-square test on precomputed per-variation counts, e.g. pooled
    /// over several games.
    pub fn from_counts(contestants: usize, counts: Vec<u64>) -> Result<Self> {
        let expected_len = enumerate_variations(contestants)?.len();
        if counts.len() != expected_len {
            return Err(Error::DimensionMismatch { left: counts.len(), right: expected_len });
        }
        let played: u64 = counts.iter().sum();
        if played == 0 {
            return Err(Error::EmptyTranscript);
        }
        let expected = played as f64 / counts.len() as f64;
        let chi_square = counts
            .iter()
            .map(|&k| (k as f64 - expected).powi(2) / expected)
            .sum::<f64>();
        let dof = counts.len() - 1;
        let p_value = ChiSquared::new(dof as f64)
            .map(|d| d.sf(chi_square))
            .unwrap_or(f64::NAN);
        Ok(BalanceReport {
            contestants,
            played: played as usize,
            counts,
            chi_square,
            degrees_of_freedom: dof,
            p_value,
        })
    }
}

