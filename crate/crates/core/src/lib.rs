//! Simulation and exact analysis of the modified "Guess My Number" game.
//!
//! A referee hands `c ∈ {3, 4}` isolated contestants apple counts from
//! `{0, 1/2, 1, 3/2}` with an integer total. Alice must announce whether the
//! total is even or odd after receiving the XOR of one bit from each other
//! contestant. Contestants may refuse a round, but must play at least a
//! fraction `p` of the `N` rounds.
//!
//! * [`quantum`]: a state-vector simulator for the GHZ resource.
//! * [`game`]: the referee, transcripts, and the Monte Carlo driver.
//! * [`strategies`]: classical and GHZ teams, and an exhaustive strategy search.
//! * [`analysis`]: exact winning probabilities, efficiency thresholds, datasets.
//!
//! ```
//! use gmn_core::analysis::pc_limit;
//!
//! let p_c = pc_limit(3, 0.17, 1e-4).unwrap().value();
//! assert!((p_c - 0.92).abs() < 0.005);
//! ```

pub mod analysis;
mod error;
pub mod game;
pub mod quantum;
pub mod rng;
pub mod strategies;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quantum.md")]
    mod quantum {}
    #[doc = include_str!("../../../book/src/game.md")]
    mod game {}
    #[doc = include_str!("../../../book/src/classical_bound.md")]
    mod classical_bound {}
    #[doc = include_str!("../../../book/src/efficiency.md")]
    mod efficiency {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
