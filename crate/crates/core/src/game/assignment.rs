use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_contestants, Error, Result};
use crate::quantum::HalfInteger;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// What the referee hands out in one round, before checking the total.
/// Under `all_uniform` sampling the total may be a half-integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Deal(Vec<HalfInteger>);

impl Deal {
    pub fn new(counts: Vec<HalfInteger>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[HalfInteger] {
        &self.0
    }

    pub fn total_halves(&self) -> u32 {
        self.0.iter().map(|h| u32::from(h.halves())).sum()
    }

    pub fn assignment(&self) -> Option<AppleAssignment> {
        AppleAssignment::new(self.0.clone()).ok()
    }

    /// Compact form: one digit of halves per contestant, e.g. `"0213"`.
    pub fn halves_string(&self) -> String {
        self.0.iter().map(|h| char::from(b'0' + h.halves())).collect()
    }
}

/// Per-contestant apple counts whose total is an integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<HalfInteger>", into = "Vec<HalfInteger>")]
pub struct AppleAssignment(Vec<HalfInteger>);

impl AppleAssignment {
    pub fn new(counts: Vec<HalfInteger>) -> Result<Self> {
        let halves: u32 = counts.iter().map(|h| u32::from(h.halves())).sum();
        if halves.is_multiple_of(2) {
            Ok(Self(counts))
        } else {
            Err(Error::NonIntegerTotal { halves })
        }
    }

    /// Builds from raw half-unit counts, e.g. `[0, 0, 1, 3]` for `(0, 0, 1/2, 3/2)`.
    pub fn from_halves(halves: &[u8]) -> Result<Self> {
        let counts = halves.iter().map(|&h| HalfInteger::new(h)).collect::<Result<_>>()?;
        Self::new(counts)
    }

    pub fn counts(&self) -> &[HalfInteger] {
        &self.0
    }

    pub fn contestants(&self) -> usize {
        self.0.len()
    }

    /// The integer number of apples distributed.
    pub fn total(&self) -> u32 {
        self.0.iter().map(|h| u32::from(h.halves())).sum::<u32>() / 2
    }

    /// Position of this assignment in [`enumerate_variations`] order.
    pub fn variation_index(&self) -> usize {
        self.0.iter().fold(0, |acc, h| acc * 4 + usize::from(h.halves())) / 2
    }

    pub fn deal(&self) -> Deal {
        Deal(self.0.clone())
    }
}

impl TryFrom<Vec<HalfInteger>> for AppleAssignment {
    type Error = Error;

    fn try_from(v: Vec<HalfInteger>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AppleAssignment> for Vec<HalfInteger> {
    fn from(a: AppleAssignment) -> Self {
        a.0
    }
}

impl fmt::Display for AppleAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, h) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, ")")
    }
}

/// Every ordered deal of `{0, 1/2, 1, 3/2}` to `c` contestants (`4^c` of them),
/// qubit/party 0 varying slowest.
pub fn all_deals(c: usize) -> Result<Vec<Deal>> {
    check_contestants(c)?;
    Ok((0..1usize << (2 * c))
        .map(|code| {
            Deal(
                (0..c)
                    .rev()
                    .map(|shift| HalfInteger::ALL[(code >> (2 * shift)) & 3])
                    .collect(),
            )
        })
        .collect())
}

/// Every ordered assignment with an integer total, each once: 32 for `c = 3`
/// and 128 for `c = 4`.
pub fn enumerate_variations(c: usize) -> Result<Vec<AppleAssignment>> {
    Ok(all_deals(c)?
        .into_iter()
        .filter_map(|d| d.assignment())
        .collect())
}

pub fn parity_of_total(a: &AppleAssignment) -> Parity {
    Parity::from_bit(a.total() % 2 == 1)
}

/// An unordered multiset of apple counts and how many orderings it has.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Combination {
    pub counts: Vec<HalfInteger>,
    pub total: u32,
    pub variations: usize,
}

/// Groups [`enumerate_variations`] into unordered combinations, sorted by
/// total and then by the sorted multiset.
pub fn combination_census(c: usize) -> Result<Vec<Combination>> {
    let mut groups: BTreeMap<(u32, Vec<HalfInteger>), usize> = BTreeMap::new();
    for a in enumerate_variations(c)? {
        let mut key = a.counts().to_vec();
        key.sort();
        *groups.entry((a.total(), key)).or_default() += 1;
    }
    Ok(groups
        .into_iter()
        .map(|((total, counts), variations)| Combination { counts, total, variations })
        .collect())
}
