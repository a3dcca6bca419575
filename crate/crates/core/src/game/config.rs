use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_contestants, check_unit, Error, Result};

/// How the referee draws each round's apples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// I.i.d. uniform over the integer-total variations.
    #[default]
    IntegerUniform,
    /// I.i.d. uniform over all `4^c` ordered deals. A half-integer deal is
    /// void: it counts as a refused round, or is re-dealt if the round is
    /// forced.
    AllUniform,
    /// Successive shuffled decks of the full variation list.
    BalancedBlocks,
}

impl fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplingMode::IntegerUniform => "integer_uniform",
            SamplingMode::AllUniform => "all_uniform",
            SamplingMode::BalancedBlocks => "balanced_blocks",
        })
    }
}

impl FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integer_uniform" => Ok(SamplingMode::IntegerUniform),
            "all_uniform" => Ok(SamplingMode::AllUniform),
            "balanced_blocks" => Ok(SamplingMode::BalancedBlocks),
            other => Err(Error::InvalidArgument(format!("unknown sampling mode {other:?}"))),
        }
    }
}

/// Referee parameters for one game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub contestants: usize,
    pub rounds: usize,
    pub forced_fraction: f64,
    /// Minimum number of played rounds, `ceil(p·N)`.
    pub quota: usize,
    pub sampling_mode: SamplingMode,
    pub seed: u64,
}

impl GameConfig {
    pub fn new(
        contestants: usize,
        rounds: usize,
        forced_fraction: f64,
        sampling_mode: SamplingMode,
        seed: u64,
    ) -> Result<Self> {
        check_contestants(contestants)?;
        check_unit("forced fraction", forced_fraction)?;
        if rounds == 0 {
            return Err(Error::InvalidArgument("rounds must be positive".into()));
        }
        Ok(Self {
            contestants,
            rounds,
            forced_fraction,
            quota: quota_for(forced_fraction, rounds),
            sampling_mode,
            seed,
        })
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// `ceil(p·N)`, ignoring floating noise so that e.g. `0.17 · 100` gives 17.
pub fn quota_for(p: f64, n: usize) -> usize {
    let exact = p * n as f64;
    let r = (exact - 1e-9 * exact.max(1.0)).ceil().max(0.0) as usize;
    r.min(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quota_rounding() {
        assert_eq!(quota_for(0.17, 100), 17);
        assert_eq!(quota_for(0.05, 100), 5);
        assert_eq!(quota_for(0.171, 100), 18);
        assert_eq!(quota_for(1.0, 7), 7);
        assert_eq!(quota_for(0.0, 7), 0);
        assert_eq!(quota_for(0.3, 10), 3);
    }

    #[test]
    fn config_validation() {
        assert!(GameConfig::new(3, 0, 0.5, SamplingMode::AllUniform, 0).is_err());
        assert!(GameConfig::new(5, 10, 0.5, SamplingMode::AllUniform, 0).is_err());
        assert!(GameConfig::new(3, 10, 1.5, SamplingMode::AllUniform, 0).is_err());
        let c = GameConfig::new(4, 100, 0.05, SamplingMode::default(), 9).unwrap();
        assert_eq!(c.quota, 5);
        assert_eq!(c.sampling_mode, SamplingMode::IntegerUniform);
    }

    #[test]
    fn mode_names_round_trip() {
        for m in [SamplingMode::IntegerUniform, SamplingMode::AllUniform, SamplingMode::BalancedBlocks] {
            assert_eq!(m.to_string().parse::<SamplingMode>().unwrap(), m);
        }
    }
}
