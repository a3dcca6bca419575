use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::assignment::{all_deals, enumerate_variations, parity_of_total, AppleAssignment, Deal, Parity};
use super::audit::{balance_audit, BalanceReport};
use super::config::{GameConfig, SamplingMode};
use crate::error::{Error, Result};
use crate::quantum::HalfInteger;
use crate::rng::{deck_rng, derive_seed, round_rng, PartyRng};

/// Public information available to every contestant when asked to play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundContext {
    /// 1-based round index.
    pub round: usize,
    pub plays_so_far: usize,
    pub rounds: usize,
    pub quota: usize,
    pub forced: bool,
}

/// A contestant's answer to "are you ready?" and the bit she would send.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Response {
    pub ready: bool,
    pub bit: bool,
}

/// Contestant behavior. Party 0 is Alice, who decides; parties `1..c` send
/// bits to the referee.
///
/// Each method sees only that party's apples, the public [`RoundContext`],
/// the resource prepared before the round, and the party's private
/// randomness. The referee consults parties `1..c` in order and Alice last.
pub trait TeamStrategy: Sync {
    /// Resource carried into the booths (shared randomness, an entangled state).
    type Shared;

    fn contestants(&self) -> usize;

    fn prepare(&self, rng: &mut PartyRng) -> Self::Shared;

    fn respond(
        &self,
        party: usize,
        apples: HalfInteger,
        ctx: &RoundContext,
        shared: &mut Self::Shared,
        rng: &mut PartyRng,
    ) -> Response;

    /// Alice's guess given her own response and the referee's XOR of the
    /// other parties' bits.
    fn decide(
        &self,
        own: Response,
        apples: HalfInteger,
        referee_sum: bool,
        ctx: &RoundContext,
        rng: &mut PartyRng,
    ) -> Parity;
}

/// Outcome of one round as seen by the referee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundPlay {
    pub responses: Vec<Response>,
    pub played: bool,
    /// Bits of parties `1..c`, present only if played.
    pub messages: Option<Vec<bool>>,
    pub referee_sum: Option<bool>,
    pub guess: Option<Parity>,
    pub win: Option<bool>,
}

/// Plays a single round with an integer-total assignment. `seed` fixes the
/// shared resource and every party's private stream.
pub fn play_round<T: TeamStrategy>(
    team: &T,
    assignment: &AppleAssignment,
    ctx: &RoundContext,
    seed: u64,
) -> RoundPlay {
    let c = team.contestants();
    let counts = assignment.counts();
    let mut seeder = PartyRng::seed_from_u64(seed);
    let mut shared_rng = PartyRng::seed_from_u64(seeder.next_u64());
    let mut rngs: Vec<PartyRng> = (0..c).map(|_| PartyRng::seed_from_u64(seeder.next_u64())).collect();

    let mut shared = team.prepare(&mut shared_rng);
    let mut responses = vec![Response { ready: false, bit: false }; c];
    for party in (1..c).chain(std::iter::once(0)) {
        responses[party] = team.respond(party, counts[party], ctx, &mut shared, &mut rngs[party]);
    }

    let played = ctx.forced || responses.iter().all(|r| r.ready);
    if !played {
        return RoundPlay { responses, played, messages: None, referee_sum: None, guess: None, win: None };
    }
    let messages: Vec<bool> = responses[1..].iter().map(|r| r.bit).collect();
    let referee_sum = messages.iter().fold(false, |acc, &b| acc ^ b);
    let guess = team.decide(responses[0], counts[0], referee_sum, ctx, &mut rngs[0]);
    let win = guess == parity_of_total(assignment);
    RoundPlay {
        responses,
        played,
        messages: Some(messages),
        referee_sum: Some(referee_sum),
        guess: Some(guess),
        win: Some(win),
    }
}

/// True iff refusing round `t` (1-based) would make the quota unreachable,
/// given `plays` rounds already played.
pub fn quota_forced(t: usize, plays: usize, config: &GameConfig) -> bool {
    let owed = config.quota.saturating_sub(plays);
    owed > 0 && config.rounds + 1 - t <= owed
}

/// One line of a transcript.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub t: usize,
    pub deal: Deal,
    pub forced: bool,
    pub accepted: Vec<bool>,
    pub played: bool,
    pub messages: Option<Vec<bool>>,
    pub referee_sum: Option<bool>,
    pub guess: Option<Parity>,
    pub win: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rounds_played: usize,
    pub forced_rounds: usize,
    pub wins: usize,
    /// `wins / rounds_played`; absent when nothing was played.
    pub win_rate: Option<f64>,
    pub balance: Option<BalanceReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub config: GameConfig,
    pub rounds: Vec<RoundRecord>,
    pub summary: Summary,
}

impl Transcript {
    pub fn played(&self) -> impl Iterator<Item = &RoundRecord> {
        self.rounds.iter().filter(|r| r.played)
    }
}

/// Draws deals for one game according to the sampling mode.
struct Dealer {
    mode: SamplingMode,
    seed: u64,
    variations: Vec<AppleAssignment>,
    deals: Vec<Deal>,
    deck: Vec<usize>,
    decks_dealt: usize,
}

impl Dealer {
    fn new(config: &GameConfig) -> Result<Self> {
        Ok(Self {
            mode: config.sampling_mode,
            seed: config.seed,
            variations: enumerate_variations(config.contestants)?,
            deals: match config.sampling_mode {
                SamplingMode::AllUniform => all_deals(config.contestants)?,
                _ => Vec::new(),
            },
            deck: Vec::new(),
            decks_dealt: 0,
        })
    }

    fn uniform_variation(&self, rng: &mut impl Rng) -> Deal {
        self.variations[rng.random_range(0..self.variations.len())].deal()
    }

    fn next(&mut self, forced: bool, rng: &mut impl Rng) -> Deal {
        match self.mode {
            SamplingMode::IntegerUniform => self.uniform_variation(rng),
            SamplingMode::AllUniform => {
                let deal = self.deals[rng.random_range(0..self.deals.len())].clone();
                if forced && deal.assignment().is_none() {
                    // a void deal is re-dealt when the round cannot be refused
                    loop {
                        let d = &self.deals[rng.random_range(0..self.deals.len())];
                        if d.total_halves().is_multiple_of(2) {
                            break d.clone();
                        }
                    }
                } else {
                    deal
                }
            }
            SamplingMode::BalancedBlocks => {
                if self.deck.is_empty() {
                    self.deck = (0..self.variations.len()).collect();
                    self.deck.shuffle(&mut deck_rng(self.seed, self.decks_dealt));
                    self.decks_dealt += 1;
                }
                let i = self.deck.pop().expect("deck refilled above");
                self.variations[i].deal()
            }
        }
    }
}

/// Runs a full game of `config.rounds` rounds.
pub fn play_game<T: TeamStrategy>(config: &GameConfig, team: &T) -> Result<Transcript> {
    if team.contestants() != config.contestants {
        return Err(Error::ArityMismatch { team: team.contestants(), game: config.contestants });
    }
    let c = config.contestants;
    let mut dealer = Dealer::new(config)?;
    let mut rounds = Vec::with_capacity(config.rounds);
    let mut plays = 0;
    let mut wins = 0;
    let mut forced_rounds = 0;

    for t in 1..=config.rounds {
        let forced = quota_forced(t, plays, config);
        let mut rng = round_rng(config.seed, t);
        let round_seed = rng.next_u64();
        let deal = dealer.next(forced, &mut rng);
        forced_rounds += usize::from(forced);

        let record = match deal.assignment() {
            Some(assignment) => {
                let ctx = RoundContext {
                    round: t,
                    plays_so_far: plays,
                    rounds: config.rounds,
                    quota: config.quota,
                    forced,
                };
                let p = play_round(team, &assignment, &ctx, round_seed);
                plays += usize::from(p.played);
                wins += usize::from(p.win == Some(true));
                RoundRecord {
                    t,
                    deal,
                    forced,
                    accepted: p.responses.iter().map(|r| r.ready).collect(),
                    played: p.played,
                    messages: p.messages,
                    referee_sum: p.referee_sum,
                    guess: p.guess,
                    win: p.win,
                }
            }
            None => RoundRecord {
                t,
                deal,
                forced,
                accepted: vec![false; c],
                played: false,
                messages: None,
                referee_sum: None,
                guess: None,
                win: None,
            },
        };
        rounds.push(record);
    }

    let mut transcript = Transcript {
        config: config.clone(),
        rounds,
        summary: Summary {
            rounds_played: plays,
            forced_rounds,
            wins,
            win_rate: (plays > 0).then(|| wins as f64 / plays as f64),
            balance: None,
        },
    };
    if plays > 0 {
        transcript.summary.balance = Some(balance_audit(&transcript)?);
    }
    Ok(transcript)
}

/// Aggregate of many independent games.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub games: usize,
    pub games_with_plays: usize,
    /// Mean over games of the per-game win rate among played rounds.
    pub mean_win_rate: f64,
    /// Standard error of that mean (sample standard deviation / √games).
    pub std_error: f64,
    pub total_played: usize,
    pub total_wins: usize,
}

/// Plays `games` independent games; game `g` uses seed
/// `derive_seed(config.seed, g)`. Output does not depend on thread count.
pub fn monte_carlo<T: TeamStrategy>(
    config: &GameConfig,
    team: &T,
    games: usize,
) -> Result<MonteCarloSummary> {
    if games == 0 {
        return Err(Error::InvalidArgument("need at least one game".into()));
    }
    let summaries: Vec<Summary> = (0..games)
        .into_par_iter()
        .map(|g| play_game(&config.with_seed(derive_seed(config.seed, g)), team).map(|t| t.summary))
        .collect::<Result<_>>()?;
    let rates: Vec<f64> = summaries.iter().filter_map(|s| s.win_rate).collect();
    let n = rates.len();
    let mean = if n > 0 { rates.iter().sum::<f64>() / n as f64 } else { f64::NAN };
    let std_error = if n > 1 {
        let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    Ok(MonteCarloSummary {
        games,
        games_with_plays: n,
        mean_win_rate: mean,
        std_error,
        total_played: summaries.iter().map(|s| s.rounds_played).sum(),
        total_wins: summaries.iter().map(|s| s.wins).sum(),
    })
}
