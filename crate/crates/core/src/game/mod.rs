//! The referee: apple distribution, refusal quota, transcripts and audits.

mod assignment;
mod audit;
mod config;
mod engine;
pub mod io;

pub use assignment::{
    all_deals, combination_census, enumerate_variations, parity_of_total, AppleAssignment,
    Combination, Deal, Parity,
};
pub use audit::{balance_audit, BalanceReport};
pub use config::{GameConfig, SamplingMode};
pub use engine::{
    monte_carlo, play_game, play_round, quota_forced, MonteCarloSummary, Response,
    RoundContext, RoundPlay, RoundRecord, Summary, TeamStrategy, Transcript,
};
