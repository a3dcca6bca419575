//! Test-only oracles and helper teams shared by the integration suites.
#![allow(dead_code)]

use gmn_core::game::{Parity, Response, RoundContext, TeamStrategy};
use gmn_core::quantum::HalfInteger;
use gmn_core::rng::PartyRng;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// Exact binomial coefficient, `C(-1, 0) = 1` and `C(n, k) = 0` for `0 <= n < k`.
pub fn big_binomial(n: i64, k: i64) -> BigInt {
    assert!(k >= 0);
    if k == 0 {
        return BigInt::one();
    }
    assert!(n >= 0);
    if n < k {
        return BigInt::zero();
    }
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// The finite-N classical bound evaluated exactly, straight from its two
/// sums, with `r` given explicitly. With `μ = 1/m` every term shares the
/// denominator `4r·m^N`, so the sums are carried as big integers and divided
/// once at the end.
pub fn big_rational_bound(c: usize, n: i64, r: i64) -> f64 {
    let m = BigInt::from((1i64 << (2 * c)) / 8);
    let rest = &m - BigInt::one();
    let pow = |x: &BigInt, e: i64| x.pow(e as u32);
    let scale = if r > 0 { BigInt::from(4 * r) } else { BigInt::one() };
    let mut numerator = BigInt::zero();
    if r > 0 {
        for j in 0..=r {
            numerator += pow(&rest, n - r)
                * BigInt::from(j + 3 * r)
                * pow(&m, r - j)
                * big_binomial(n - r + j - 1, j);
        }
    }
    for j in r + 1..=n {
        numerator += &scale * pow(&rest, n - j) * big_binomial(n, j);
    }
    BigRational::new(numerator, scale * pow(&m, n)).to_f64().unwrap()
}

/// Volunteers with probability `eagerness` from private randomness and
/// sends random bits.
pub struct CoinTeam {
    pub contestants: usize,
    pub eagerness: f64,
}

impl TeamStrategy for CoinTeam {
    type Shared = ();

    fn contestants(&self) -> usize {
        self.contestants
    }

    fn prepare(&self, _: &mut PartyRng) {}

    fn respond(&self, _: usize, _: HalfInteger, _: &RoundContext, _: &mut (), rng: &mut PartyRng) -> Response {
        Response { ready: rng.random::<f64>() < self.eagerness, bit: rng.random() }
    }

    fn decide(&self, _: Response, _: HalfInteger, s: bool, _: &RoundContext, _: &mut PartyRng) -> Parity {
        Parity::from_bit(s)
    }
}

/// Three standard errors of a proportion `p` estimated from `n` trials.
pub fn three_se(p: f64, n: usize) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}
