//! Exhaustive search over deterministic one-bit classical strategies.
//!
//! A strategy is a message map `{0, 1/2, 1, 3/2} → bit` for each of the
//! parties `1..c` plus Alice's table `(n_A, referee_sum) → parity`. For a
//! fixed choice of message maps the best table is a per-cell majority vote,
//! so the search only enumerates message maps.

use serde::Serialize;

use crate::error::{check_contestants, Error, Result};
use crate::game::{enumerate_variations, parity_of_total, AppleAssignment};
use crate::quantum::HalfInteger;

/// Cap on the worst-case `candidates × message maps × variations` of one
/// search. The four-party product-set search needs about `5.3e9`.
pub const DEFAULT_SEARCH_BOUND: u128 = 1 << 33;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForcedOptimum {
    pub wins: usize,
    pub variations: usize,
    pub rate: f64,
    /// How many message-map tuples reach the optimum.
    pub optimal_message_maps: usize,
    /// One optimal tuple, as 4-bit masks (bit `h` = message for `h` halves).
    pub example_messages: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertainWinSearch {
    /// Product sets examined (one per ordering class of the senders).
    pub candidates: usize,
    /// Integer-total assignments in the largest certain-win product set.
    pub size: usize,
    /// Every product set reaching `size`, one accept set per party, senders
    /// listed in a canonical order.
    pub best_sets: Vec<Vec<Vec<HalfInteger>>>,
}

/// The per-round certain-win opportunity rate implied by the explicit
/// search, next to the closed-form `μ = 8 / 4^c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuComparison {
    pub mu_numerator: u64,
    pub mu_denominator: u64,
    pub mu: f64,
    pub certain_win_size: usize,
    /// `size / 4^c`: rate when the referee deals over all ordered deals.
    pub rate_all_uniform: f64,
    /// `size / #variations`: rate over integer-total deals only.
    pub rate_integer_uniform: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub contestants: usize,
    pub forced: ForcedOptimum,
    pub certain_win: CertainWinSearch,
    pub mu: MuComparison,
}

pub fn brute_force_oracle(c: usize) -> Result<OracleReport> {
    brute_force_oracle_with_bound(c, DEFAULT_SEARCH_BOUND)
}

pub fn brute_force_oracle_with_bound(c: usize, bound: u128) -> Result<OracleReport> {
    check_contestants(c)?;
    let variations = enumerate_variations(c)?;
    let forced = forced_optimum(c, &variations, bound)?;
    let certain_win = certain_win_search(c, &variations, bound)?;
    let deals = 1u64 << (2 * c);
    let mu = MuComparison {
        mu_numerator: 8,
        mu_denominator: deals,
        mu: 8.0 / deals as f64,
        certain_win_size: certain_win.size,
        rate_all_uniform: certain_win.size as f64 / deals as f64,
        rate_integer_uniform: certain_win.size as f64 / variations.len() as f64,
    };
    Ok(OracleReport { contestants: c, forced, certain_win, mu })
}

#[inline]
fn bit(mask: u8, h: HalfInteger) -> bool {
    mask >> h.halves() & 1 == 1
}

/// Cell of Alice's table for a variation under the given message masks.
#[inline]
fn cell(a: &AppleAssignment, masks: &[u8]) -> usize {
    let n = a.counts();
    let sum = n[1..].iter().zip(masks).fold(false, |acc, (&h, &m)| acc ^ bit(m, h));
    usize::from(n[0].halves()) * 2 + usize::from(sum)
}

/// Calls `f` with every tuple of `parties` masks drawn from `choices[j]`.
fn for_each_tuple(choices: &[Vec<u8>], f: &mut impl FnMut(&[u8]) -> bool) {
    fn go(choices: &[Vec<u8>], acc: &mut Vec<u8>, f: &mut impl FnMut(&[u8]) -> bool) -> bool {
        match choices.split_first() {
            None => f(acc),
            Some((first, rest)) => {
                for &m in first {
                    acc.push(m);
                    if !go(rest, acc, f) {
                        return false;
                    }
                    acc.pop();
                }
                true
            }
        }
    }
    go(choices, &mut Vec::with_capacity(choices.len()), f);
}

fn guard(size: u128, bound: u128) -> Result<()> {
    if size > bound {
        Err(Error::ResourceGuard { size, bound })
    } else {
        Ok(())
    }
}

fn forced_optimum(c: usize, variations: &[AppleAssignment], bound: u128) -> Result<ForcedOptimum> {
    guard(16u128.pow(c as u32 - 1) * variations.len() as u128, bound)?;
    let all_masks: Vec<Vec<u8>> = vec![(0..16).collect(); c - 1];
    let mut best = 0;
    let mut count = 0;
    let mut example = Vec::new();
    for_each_tuple(&all_masks, &mut |masks| {
        let mut tally = [[0usize; 2]; 8];
        for a in variations {
            tally[cell(a, masks)][usize::from(parity_of_total(a).is_odd())] += 1;
        }
        let wins: usize = tally.iter().map(|t| t[0].max(t[1])).sum();
        if wins > best {
            best = wins;
            count = 0;
            example = masks.to_vec();
        }
        if wins == best {
            count += 1;
        }
        true
    });
    Ok(ForcedOptimum {
        wins: best,
        variations: variations.len(),
        rate: best as f64 / variations.len() as f64,
        optimal_message_maps: count,
        example_messages: example,
    })
}

fn submasks(set: u8) -> Vec<u8> {
    (0..16u8).filter(|m| m & !set == 0).collect()
}

fn members(set: u8) -> Vec<HalfInteger> {
    HalfInteger::ALL.into_iter().filter(|&h| bit(set, h)).collect()
}

/// True if some message maps let Alice's table be right on every variation.
fn certain_win_exists(sets: &[u8], inside: &[&AppleAssignment]) -> bool {
    let choices: Vec<Vec<u8>> = sets[1..].iter().map(|&s| submasks(s)).collect();
    let mut found = false;
    for_each_tuple(&choices, &mut |masks| {
        let mut table = [None::<bool>; 8];
        let consistent = inside.iter().all(|a| {
            let odd = parity_of_total(a).is_odd();
            let slot = &mut table[cell(a, masks)];
            *slot.get_or_insert(odd) == odd
        });
        found = consistent;
        !found
    });
    found
}

fn certain_win_search(c: usize, variations: &[AppleAssignment], bound: u128) -> Result<CertainWinSearch> {
    // the referee XORs the senders' bits, so sender order is irrelevant:
    // enumerate Alice's set times nondecreasing tuples of sender sets
    let mut candidates: Vec<Vec<u8>> = Vec::new();
    for alice in 1..16u8 {
        let mut senders = vec![1u8; c - 1];
        loop {
            candidates.push(std::iter::once(alice).chain(senders.iter().copied()).collect());
            match senders.iter().rposition(|&s| s < 15) {
                None => break,
                Some(i) => {
                    let v = senders[i] + 1;
                    senders[i..].iter_mut().for_each(|s| *s = v);
                }
            }
        }
    }
    guard(
        candidates.len() as u128 * 16u128.pow(c as u32 - 1) * variations.len() as u128,
        bound,
    )?;

    let mut sized: Vec<(usize, Vec<&AppleAssignment>, &Vec<u8>)> = candidates
        .iter()
        .map(|sets| {
            let inside: Vec<&AppleAssignment> = variations
                .iter()
                .filter(|a| a.counts().iter().zip(sets).all(|(&h, &s)| bit(s, h)))
                .collect();
            (inside.len(), inside, sets)
        })
        .collect();
    sized.sort_by_key(|x| std::cmp::Reverse(x.0));

    let mut size = 0;
    let mut best_sets = Vec::new();
    for (n, inside, sets) in &sized {
        if *n == 0 || *n < size {
            break;
        }
        if certain_win_exists(sets, inside) {
            size = *n;
            best_sets.push(sets.iter().map(|&s| members(s)).collect());
        }
    }
    Ok(CertainWinSearch { candidates: candidates.len(), size, best_sets })
}
