//! The best classical winning probability at finite `N` and its limit.
//!
//! With `μ` the per-round chance of a certain-win opportunity and
//! `r = round(p·N)`, the team either reaches `N - r` refusals after `j <= r`
//! voluntary wins and then plays `r - j` forced rounds at 3/4,
//!
//! ```text
//! (1-μ)^(N-r) / (4r) · Σ_{j=0..r} (j + 3r) μ^j C(N-r+j-1, j)
//! ```
//!
//! or sees more than `r` opportunities and wins every round it plays,
//!
//! ```text
//! Σ_{j=r+1..N} (1-μ)^(N-j) μ^j C(N, j).
//! ```
//!
//! Terms are assembled in log space and summed with compensation. Long sums
//! are pruned around their mode: both summands are log-concave in `j`.

use serde::{Deserialize, Serialize};

use super::binomial::{log_binomial, NeumaierSum};
use crate::error::{check_contestants, check_unit, Error, Result};

/// Exact non-negative rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
}

impl Ratio {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(numerator, denominator).max(1);
        Self { numerator: numerator / g, denominator: denominator / g }
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// `μ = 8 / 2^(2c)`.
pub fn mu(c: usize) -> Result<Ratio> {
    check_contestants(c)?;
    Ok(Ratio::new(8, 1 << (2 * c)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcEvaluation {
    pub contestants: usize,
    pub forced_fraction: f64,
    pub rounds: u64,
    /// `round(p·N)`, standing in for `pN`.
    pub quota: u64,
    pub value: f64,
    pub converged: bool,
    /// `|value(N) - value(N/2)|` when produced by [`pc_limit`].
    pub truncation_error: Option<f64>,
}

/// Sums `exp(log_term(j))` for `j` in `lo..=hi`.
fn sum_exp<F: Fn(u64) -> f64>(lo: u64, hi: u64, mode_guess: u64, log_term: F) -> f64 {
    const FULL_SUM_LEN: u64 = 4096;
    const CUTOFF: f64 = 50.0;
    if lo > hi {
        return 0.0;
    }
    if hi - lo <= FULL_SUM_LEN {
        return (lo..=hi).map(|j| log_term(j).exp()).collect::<NeumaierSum>().value();
    }
    let mut mode = mode_guess.clamp(lo, hi);
    let mut peak = log_term(mode);
    if peak == f64::NEG_INFINITY {
        return (lo..=hi).map(|j| log_term(j).exp()).collect::<NeumaierSum>().value();
    }
    // climb to the maximum of a log-concave sequence
    loop {
        if mode < hi && log_term(mode + 1) > peak {
            mode += 1;
            peak = log_term(mode);
        } else if mode > lo && log_term(mode - 1) > peak {
            mode -= 1;
            peak = log_term(mode);
        } else {
            break;
        }
    }
    let mut acc = NeumaierSum::default();
    acc.add(peak.exp());
    for j in (lo..mode).rev() {
        let t = log_term(j);
        acc.add(t.exp());
        if t < peak - CUTOFF {
            break;
        }
    }
    for j in mode + 1..=hi {
        let t = log_term(j);
        acc.add(t.exp());
        if t < peak - CUTOFF {
            break;
        }
    }
    acc.value()
}

/// Evaluates the bracketed finite-`N` expression.
///
/// At `r = 0` the forced-play term is taken as 0 and only the `j >= 1`
/// tail remains.
pub fn pc_exact(c: usize, p: f64, n: u64) -> Result<PcEvaluation> {
    let mu = mu(c)?.to_f64();
    check_unit("forced fraction", p)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let r = ((p * n as f64).round() as u64).min(n);
    let ln_mu = mu.ln();
    let ln_rest = (-mu).ln_1p();
    let (ni, ri) = (n as i64, r as i64);

    let forced_part = if r == 0 {
        0.0
    } else {
        let s = n - r;
        let prefix = s as f64 * ln_rest - (4.0 * r as f64).ln();
        let mode = if s > 1 { ((s - 1) as f64 * mu / (1.0 - mu)) as u64 } else { 0 };
        sum_exp(0, r, mode, |j| {
            let ji = j as i64;
            prefix
                + ((j + 3 * r) as f64).ln()
                + j as f64 * ln_mu
                + log_binomial(ni - ri + ji - 1, ji).expect("k >= 0")
        })
    };
    let voluntary_part = sum_exp(r + 1, n, (n as f64 * mu) as u64, |j| {
        (n - j) as f64 * ln_rest + j as f64 * ln_mu + log_binomial(ni, j as i64).expect("k >= 0")
    });

    let value = (forced_part + voluntary_part).clamp(0.0, 1.0);
    Ok(PcEvaluation {
        contestants: c,
        forced_fraction: p,
        rounds: n,
        quota: r,
        value,
        converged: false,
        truncation_error: None,
    })
}

/// N-doubling schedule for [`pc_limit_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitOptions {
    pub tolerance: f64,
    pub first_exponent: u32,
    pub max_exponent: u32,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self { tolerance: 1e-4, first_exponent: 10, max_exponent: 22 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcLimit {
    pub evaluation: PcEvaluation,
    /// `(N, value)` for every `N` evaluated.
    pub record: Vec<(u64, f64)>,
}

impl PcLimit {
    pub fn value(&self) -> f64 {
        self.evaluation.value
    }
}

/// Large-`N` limit with the default schedule (`N = 2^10 … 2^22`).
pub fn pc_limit(c: usize, p: f64, tolerance: f64) -> Result<PcLimit> {
    pc_limit_with(c, p, LimitOptions { tolerance, ..LimitOptions::default() })
}

/// Doubles `N` until two successive values differ by less than the
/// tolerance; running past `2^max_exponent` is an error carrying the record.
pub fn pc_limit_with(c: usize, p: f64, opts: LimitOptions) -> Result<PcLimit> {
    if opts.tolerance.is_nan() || opts.tolerance <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut record = Vec::new();
    let mut previous: Option<PcEvaluation> = None;
    for e in opts.first_exponent..=opts.max_exponent {
        let mut eval = pc_exact(c, p, 1u64 << e)?;
        record.push((eval.rounds, eval.value));
        if let Some(prev) = &previous {
            let diff = (eval.value - prev.value).abs();
            if diff < opts.tolerance {
                eval.converged = true;
                eval.truncation_error = Some(diff);
                return Ok(PcLimit { evaluation: eval, record });
            }
        }
        previous = Some(eval);
    }
    Err(Error::NonConvergence {
        tolerance: opts.tolerance,
        last_rounds: 1u64 << opts.max_exponent,
        record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_values() {
        assert_eq!(mu(3).unwrap(), Ratio { numerator: 1, denominator: 8 });
        assert_eq!(mu(4).unwrap(), Ratio { numerator: 1, denominator: 32 });
        assert!(mu(2).is_err());
    }

    #[test]
    fn all_forced_is_three_quarters() {
        for c in [3, 4] {
            for n in [1, 7, 100, 5000] {
                let v = pc_exact(c, 1.0, n).unwrap().value;
                assert!((v - 0.75).abs() < 1e-9, "c={c} N={n}: {v}");
            }
        }
    }

    #[test]
    fn no_forcing_is_tail_probability() {
        let v = pc_exact(3, 0.0, 10).unwrap().value;
        assert!((v - (1.0 - (7.0f64 / 8.0).powi(10))).abs() < 1e-14);
    }

    #[test]
    fn pruned_and_full_sums_agree() {
        // 5000 rounds takes the pruned path, so compare with a brute sum
        let (c, p, n) = (3, 0.2, 5000u64);
        let m = 0.125f64;
        let r = 1000u64;
        let mut brute = NeumaierSum::default();
        for j in 0..=r {
            let t = (n - r) as f64 * (1.0 - m).ln() - (4.0 * r as f64).ln()
                + ((j + 3 * r) as f64).ln()
                + j as f64 * m.ln()
                + log_binomial((n - r + j) as i64 - 1, j as i64).unwrap();
            brute.add(t.exp());
        }
        for j in r + 1..=n {
            let t = (n - j) as f64 * (1.0 - m).ln() + j as f64 * m.ln() + log_binomial(n as i64, j as i64).unwrap();
            brute.add(t.exp());
        }
        let v = pc_exact(c, p, n).unwrap().value;
        assert!((v - brute.value()).abs() < 1e-13, "{v} vs {}", brute.value());
    }

    #[test]
    fn input_validation() {
        assert!(pc_exact(3, 1.1, 10).is_err());
        assert!(pc_exact(3, 0.5, 0).is_err());
        assert!(pc_limit(3, 0.5, 0.0).is_err());
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = LimitOptions { tolerance: 1e-15, first_exponent: 4, max_exponent: 6 };
        match pc_limit_with(3, 0.125, opts) {
            Err(Error::NonConvergence { record, .. }) => assert_eq!(record.len(), 3),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
