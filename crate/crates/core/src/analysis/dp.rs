use crate::error::{check_contestants, check_unit, Error, Result};
use crate::game::GameConfig;
use crate::game::SamplingMode;

/// Largest `N` accepted by [`strategy_dp_oracle`] (cost is `O(N·r)`).
pub const DP_ROUND_LIMIT: usize = 20_000;

/// Expected win fraction among played rounds for the explicit strategy:
/// play every opportunity (probability `nu` per round, i.i.d.) and win it,
/// refuse otherwise until forced, and win forced rounds at 3/4.
///
/// The quota is the game's `ceil(p·N)`. Games in which nothing is played
/// are left out of the average.
pub fn strategy_dp_oracle(c: usize, p: f64, n: usize, nu: f64) -> Result<f64> {
    check_contestants(c)?;
    check_unit("nu", nu)?;
    if n > DP_ROUND_LIMIT {
        return Err(Error::ResourceGuard { size: n as u128, bound: DP_ROUND_LIMIT as u128 });
    }
    let r = GameConfig::new(c, n, p, SamplingMode::AllUniform, 0)?.quota;
    if r == 0 {
        // nothing is ever forced: every played round is a certain win
        return if nu > 0.0 {
            Ok(1.0)
        } else {
            Err(Error::InvalidArgument("no round is ever played".into()))
        };
    }

    // prob[k]: probability of being at the start of round t with k plays
    // made so far and the quota not yet met
    let mut prob = vec![0.0; r];
    prob[0] = 1.0;
    let mut expected = 0.0;
    for t in 1..=n {
        let remaining = n + 1 - t;
        let mut next = vec![0.0; r];
        for (k, &q) in prob.iter().enumerate() {
            if q == 0.0 {
                continue;
            }
            if remaining <= r - k {
                // forced from here on: k certain wins plus r - k plays at 3/4
                expected += q * (k as f64 + 0.75 * (r - k) as f64) / r as f64;
                continue;
            }
            if k + 1 == r {
                // quota met voluntarily; every later play is also a certain win
                expected += q * nu;
            } else {
                next[k + 1] += q * nu;
            }
            next[k] += q * (1.0 - nu);
        }
        prob = next;
    }
    debug_assert!(prob.iter().all(|&q| q == 0.0));
    Ok(expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        for p in [0.05, 0.17, 0.5, 1.0] {
            assert_eq!(strategy_dp_oracle(3, p, 100, 0.0).unwrap(), 0.75);
        }
        for p in [0.05, 0.17, 0.5] {
            assert!((strategy_dp_oracle(3, p, 100, 1.0).unwrap() - 1.0).abs() < 1e-15);
        }
        // with p = 1 every round is forced before any opportunity can be used
        assert_eq!(strategy_dp_oracle(3, 1.0, 100, 1.0).unwrap(), 0.75);
        assert_eq!(strategy_dp_oracle(3, 0.0, 100, 0.3).unwrap(), 1.0);
        assert!(strategy_dp_oracle(3, 0.0, 100, 0.0).is_err());
        assert!(strategy_dp_oracle(3, 0.5, DP_ROUND_LIMIT + 1, 0.3).is_err());
    }

    #[test]
    fn tiny_game_by_hand() {
        // N = 2, r = 1: an opportunity in round 1 wins (value 1); otherwise
        // round 2 is forced (3/4)
        let nu = 0.3;
        let want = nu + (1.0 - nu) * 0.75;
        assert!((strategy_dp_oracle(3, 0.5, 2, nu).unwrap() - want).abs() < 1e-15);
    }
}
