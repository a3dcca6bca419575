use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Largest `n` for which `C(n, k)` is built exactly in `u128`.
const EXACT_LIMIT: i64 = 120;

/// `ln C(n, k)`.
///
/// `C(n, 0) = 1` for every `n`, including `n = -1`; `C(n, k) = 0` (so
/// `-inf`) when `0 <= n < k`. Small arguments are computed exactly, larger
/// ones through log-gamma.
pub fn log_binomial(n: i64, k: i64) -> Result<f64> {
    if k < 0 {
        return Err(Error::InvalidArgument(format!("negative k = {k} in C({n}, {k})")));
    }
    if k == 0 {
        return Ok(0.0);
    }
    if n < 0 {
        return Err(Error::InvalidArgument(format!("C({n}, {k}) has no logarithm")));
    }
    if n < k {
        return Ok(f64::NEG_INFINITY);
    }
    let k = k.min(n - k);
    if n <= EXACT_LIMIT {
        let mut c: u128 = 1;
        for i in 1..=k as u128 {
            c = c * (n as u128 - k as u128 + i) / i;
        }
        return Ok((c as f64).ln());
    }
    let (n, k) = (n as f64, k as f64);
    Ok(ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0))
}

/// Kahan–Babuška–Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}
