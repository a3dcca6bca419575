//! Seed derivation. Every random draw in a game comes from a ChaCha8 stream
//! addressed by `(seed, purpose, index)`, so any round or game can be
//! reproduced in isolation and parallel runs match serial ones.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type PartyRng = ChaCha8Rng;

const GAME_STREAM: u64 = u64::MAX;
const DECK_STREAM_BIT: u64 = 1 << 63;

/// Referee stream for round `t` of the game seeded with `seed`.
pub fn round_rng(seed: u64, t: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    rng
}

/// Shuffle stream for the `deck`-th deck in balanced-block sampling.
pub fn deck_rng(seed: u64, deck: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(DECK_STREAM_BIT | deck as u64);
    rng
}

/// Seed of the `index`-th independent game under a master seed.
pub fn derive_seed(master: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(GAME_STREAM);
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}
