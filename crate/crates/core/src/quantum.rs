//! Small state-vector simulator for three or four qubits.
//!
//! Amplitudes are stored in the computational basis `{|0>, |1>}`. The
//! preparation basis used by the protocol is `|0̄> = (|0> + |1>)/√2`,
//! `|1̄> = (|0> - |1>)/√2`. Qubit 0 is the most significant bit of the
//! amplitude index, so for four qubits index `0b1000` is `|1000>`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_contestants, Error, Result};

/// Largest squared-norm deviation accepted by [`StateVector::from_amplitudes`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// An apple count `n ∈ {0, 1/2, 1, 3/2}`, stored in half-units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct HalfInteger(u8);

impl HalfInteger {
    pub const ZERO: Self = Self(0);
    pub const HALF: Self = Self(1);
    pub const ONE: Self = Self(2);
    pub const THREE_HALVES: Self = Self(3);
    pub const ALL: [Self; 4] = [Self::ZERO, Self::HALF, Self::ONE, Self::THREE_HALVES];

    pub fn new(halves: u8) -> Result<Self> {
        if halves <= 3 {
            Ok(Self(halves))
        } else {
            Err(Error::HalfIntegerRange(halves))
        }
    }

    #[inline]
    pub fn halves(self) -> u8 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Integer part of the count: 0 for `{0, 1/2}`, 1 for `{1, 3/2}`.
    #[inline]
    pub fn integer_part(self) -> bool {
        self.0 >= 2
    }

    /// True for `1/2` and `3/2`.
    #[inline]
    pub fn has_half(self) -> bool {
        self.0 & 1 == 1
    }
}

impl TryFrom<u8> for HalfInteger {
    type Error = Error;

    fn try_from(halves: u8) -> Result<Self> {
        Self::new(halves)
    }
}

impl From<HalfInteger> for u8 {
    fn from(h: HalfInteger) -> u8 {
        h.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "0",
            1 => "1/2",
            2 => "1",
            _ => "3/2",
        })
    }
}

impl FromStr for HalfInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(Self::ZERO),
            "1/2" | "0.5" => Ok(Self::HALF),
            "1" => Ok(Self::ONE),
            "3/2" | "1.5" => Ok(Self::THREE_HALVES),
            other => Err(Error::InvalidArgument(format!("not an apple count: {other:?}"))),
        }
    }
}

/// Pure state of `num_qubits ∈ {3, 4}` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, checking length and normalization.
    pub fn from_amplitudes(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_contestants(num_qubits)?;
        if amplitudes.len() != 1 << num_qubits {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for {num_qubits} qubits",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidArgument(format!("squared norm {norm} is not 1")));
        }
        Ok(Self { num_qubits, amplitudes })
    }

    /// The computational basis state `|bits>`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_contestants(num_qubits)?;
        let dim = 1 << num_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} >= {dim}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest per-amplitude distance to `other`.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64> {
        same_dims(self, other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    #[inline]
    fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    /// Probability that measuring `qubit` in the computational basis gives 1.
    pub fn probability_of_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = self.bit_mask(qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Measures a single qubit using the uniform variate `u ∈ [0, 1)` and
    /// returns the outcome together with the collapsed, renormalized state.
    /// The outcome is 1 iff `u >= P(0)`.
    pub fn measure_qubit(&self, qubit: usize, u: f64) -> Result<(bool, StateVector)> {
        let p1 = self.probability_of_one(qubit)?;
        let outcome = u >= 1.0 - p1;
        let mask = self.bit_mask(qubit);
        let p = if outcome { p1 } else { 1.0 - p1 };
        let scale = 1.0 / p.sqrt();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if (i & mask != 0) == outcome {
                    a * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((outcome, StateVector { num_qubits: self.num_qubits, amplitudes }))
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit < self.num_qubits {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange { index: qubit, qubits: self.num_qubits })
        }
    }
}

fn same_dims(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.num_qubits == b.num_qubits {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a.num_qubits, right: b.num_qubits })
    }
}

fn ghz_with_sign(c: usize, odd_weight: bool) -> Result<StateVector> {
    check_contestants(c)?;
    // (|0̄…0̄> ± |1̄…1̄>)/√2 expands onto the even (+) or odd (−) weight strings.
    let amp = (0.5f64).powf((c as f64 - 1.0) / 2.0);
    let amplitudes = (0..1usize << c)
        .map(|i| {
            if (i.count_ones() % 2 == 1) == odd_weight {
                Complex64::new(amp, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(StateVector { num_qubits: c, amplitudes })
}

/// `(|0̄…0̄> + |1̄…1̄>)/√2`: uniform over even-weight computational strings.
pub fn ghz_state(c: usize) -> Result<StateVector> {
    ghz_with_sign(c, false)
}

/// `(|0̄…0̄> − |1̄…1̄>)/√2`: uniform over odd-weight computational strings.
pub fn ghz_perp_state(c: usize) -> Result<StateVector> {
    ghz_with_sign(c, true)
}

/// `i^halves`, computed exactly.
fn phase(n: HalfInteger) -> Complex64 {
    match n.halves() {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Applies `R(n) = |0̄><0̄| + e^{iπn}|1̄><1̄|` to one qubit.
///
/// In the computational basis this is `½[[1+ω, 1−ω], [1−ω, 1+ω]]` with
/// `ω = i^halves`.
pub fn apply_rotation(state: &StateVector, qubit: usize, n: HalfInteger) -> Result<StateVector> {
    state.check_qubit(qubit)?;
    let omega = phase(n);
    let diag = (Complex64::new(1.0, 0.0) + omega) * 0.5;
    let off = (Complex64::new(1.0, 0.0) - omega) * 0.5;
    let mask = state.bit_mask(qubit);
    let mut out = state.amplitudes.clone();
    for i in (0..out.len()).filter(|i| i & mask == 0) {
        let (a0, a1) = (state.amplitudes[i], state.amplitudes[i | mask]);
        out[i] = diag * a0 + off * a1;
        out[i | mask] = off * a0 + diag * a1;
    }
    Ok(StateVector { num_qubits: state.num_qubits, amplitudes: out })
}

/// Applies `R(n_j)` to every qubit `j`.
pub fn rotate_all(state: &StateVector, counts: &[HalfInteger]) -> Result<StateVector> {
    if counts.len() != state.num_qubits {
        return Err(Error::DimensionMismatch { left: state.num_qubits, right: counts.len() });
    }
    counts
        .iter()
        .enumerate()
        .try_fold(state.clone(), |s, (q, &n)| apply_rotation(&s, q, n))
}

/// Samples a full computational-basis outcome with Born-rule probabilities.
/// Bit `j` of the result is the outcome of qubit `j`.
pub fn measure_all<R: Rng + ?Sized>(state: &StateVector, rng: &mut R) -> Vec<bool> {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let last = state.amplitudes.len() - 1;
    let index = state
        .amplitudes
        .iter()
        .position(|a| {
            acc += a.norm_sqr();
            u < acc
        })
        // rounding can leave `acc` a hair below 1; fall back to the last nonzero entry
        .unwrap_or_else(|| {
            state.amplitudes.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(last)
        });
    (0..state.num_qubits)
        .map(|q| index & state.bit_mask(q) != 0)
        .collect()
}

/// Inner product `<a|b>`.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    same_dims(a, b)?;
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Packs a bit vector (qubit 0 first) into a basis index.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EPS: f64 = 1e-12;

    fn assert_close(a: Complex64, re: f64) {
        assert!((a - Complex64::new(re, 0.0)).norm() < EPS, "{a} != {re}");
    }

    #[test]
    fn ghz4_matches_expansion() {
        let s = ghz_state(4).unwrap();
        let amp = 1.0 / (2.0 * 2f64.sqrt());
        for i in 0..16usize {
            let want = if i.count_ones() % 2 == 0 { amp } else { 0.0 };
            assert_close(s.amplitude(i), want);
        }
        let p = ghz_perp_state(4).unwrap();
        for i in [0b0001, 0b0010, 0b0100, 0b0111, 0b1000, 0b1011, 0b1101, 0b1110] {
            assert_close(p.amplitude(i), amp);
        }
        assert_close(overlap(&s, &p).unwrap(), 0.0);
    }

    #[test]
    fn ghz3_matches_expansion() {
        let s = ghz_state(3).unwrap();
        for i in [0b000, 0b011, 0b101, 0b110] {
            assert_close(s.amplitude(i), 0.5);
        }
        let p = ghz_perp_state(3).unwrap();
        for i in [0b001, 0b010, 0b100, 0b111] {
            assert_close(p.amplitude(i), 0.5);
        }
        assert!((s.norm_sqr() - 1.0).abs() < EPS);
        assert!((p.norm_sqr() - 1.0).abs() < EPS);
    }

    #[test]
    fn ghz_built_from_hadamard_basis() {
        // Independent route: tensor products of |0̄> and |1̄>.
        for c in [3, 4] {
            let h = 1.0 / 2f64.sqrt();
            let bar = |bit: bool, x: usize| if bit && x == 1 { -h } else { h };
            let mut plus = vec![Complex64::new(0.0, 0.0); 1 << c];
            for (i, a) in plus.iter_mut().enumerate() {
                let zeros: f64 = (0..c).map(|q| bar(false, (i >> q) & 1)).product();
                let ones: f64 = (0..c).map(|q| bar(true, (i >> q) & 1)).product();
                *a = Complex64::new((zeros + ones) * h, 0.0);
            }
            let built = StateVector::from_amplitudes(c, plus).unwrap();
            assert!(built.max_deviation(&ghz_state(c).unwrap()).unwrap() < EPS);
        }
    }

    #[test]
    fn unsupported_sizes() {
        assert!(matches!(ghz_state(2), Err(Error::UnsupportedContestants(2))));
        assert!(ghz_perp_state(5).is_err());
    }

    #[test]
    fn rotation_identity_and_parity_examples() {
        let g = ghz_state(4).unwrap();
        assert_eq!(apply_rotation(&g, 2, HalfInteger::ZERO).unwrap(), g);

        let odd = [HalfInteger::ONE, HalfInteger::ZERO, HalfInteger::ZERO, HalfInteger::ZERO];
        let r = rotate_all(&g, &odd).unwrap();
        assert!(r.max_deviation(&ghz_perp_state(4).unwrap()).unwrap() < EPS);

        let halves = [HalfInteger::HALF; 4];
        let r = rotate_all(&g, &halves).unwrap();
        assert!(r.max_deviation(&g).unwrap() < EPS);

        let table_row = [HalfInteger::ZERO, HalfInteger::ZERO, HalfInteger::HALF, HalfInteger::THREE_HALVES];
        let r = rotate_all(&g, &table_row).unwrap();
        assert_close(overlap(&g, &r).unwrap(), 1.0);
    }

    #[test]
    fn rotation_index_errors() {
        let g = ghz_state(3).unwrap();
        assert!(matches!(
            apply_rotation(&g, 3, HalfInteger::ONE),
            Err(Error::QubitOutOfRange { index: 3, qubits: 3 })
        ));
        assert!(overlap(&g, &ghz_state(4).unwrap()).is_err());
    }

    #[test]
    fn measure_basis_state_is_deterministic() {
        let s = StateVector::basis(4, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(measure_all(&s, &mut rng), vec![false; 4]);
        }
    }

    #[test]
    fn ghz_samples_have_even_weight() {
        let s = ghz_state(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let bits = measure_all(&s, &mut rng);
            assert_eq!(bits.iter().filter(|&&b| b).count() % 2, 0);
        }
    }

    #[test]
    fn ghz_perp_frequencies_are_uniform() {
        let s = ghz_perp_state(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 10_000;
        let mut counts = [0usize; 16];
        for _ in 0..n {
            counts[bits_to_index(&measure_all(&s, &mut rng))] += 1;
        }
        let p = 1.0 / 8.0;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        for (i, &k) in counts.iter().enumerate() {
            if i.count_ones() % 2 == 1 {
                let f = k as f64 / n as f64;
                assert!((f - p).abs() < 5.0 * se, "index {i}: {f}");
            } else {
                assert_eq!(k, 0);
            }
        }
    }

    #[test]
    fn single_qubit_collapse() {
        let s = ghz_state(3).unwrap();
        assert!((s.probability_of_one(0).unwrap() - 0.5).abs() < EPS);
        let (bit, post) = s.measure_qubit(0, 0.9).unwrap();
        assert!(bit);
        assert!((post.norm_sqr() - 1.0).abs() < EPS);
        assert!((post.probability_of_one(0).unwrap() - 1.0).abs() < EPS);
    }

    #[test]
    fn half_integer_parsing() {
        for h in HalfInteger::ALL {
            assert_eq!(h.to_string().parse::<HalfInteger>().unwrap(), h);
        }
        assert!(HalfInteger::new(4).is_err());
        assert!("2".parse::<HalfInteger>().is_err());
    }
}
