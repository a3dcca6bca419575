use serde::{Deserialize, Serialize};

use super::bound::{pc_limit, PcLimit};
use crate::error::{check_contestants, check_unit, Error, Result};
use crate::game::{monte_carlo, GameConfig, MonteCarloSummary, SamplingMode};
use crate::rng::derive_seed;
use crate::strategies::{best_classical_team, sigma_from_eta};

/// Standard error `sqrt(P(1-P)/r)` of a win rate measured over `r` rounds.
pub fn std_error(p: f64, r: usize) -> Result<f64> {
    check_unit("probability", p)?;
    if r == 0 {
        return Err(Error::InvalidArgument("standard error needs at least one round".into()));
    }
    Ok((p * (1.0 - p) / r as f64).sqrt())
}

/// One efficiency row: `sigma = eta^(1/c)` and `delta = 1 - P_C(c, eta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyPoint {
    pub contestants: usize,
    pub eta: f64,
    pub sigma: f64,
    pub delta: f64,
}

/// Published `(c, eta, delta, sigma)` rows the generated table is checked against.
pub const REFERENCE_EFFICIENCY_ROWS: [(usize, f64, f64, f64); 8] = [
    (3, 1.00, 0.250, 1.00),
    (4, 1.00, 0.250, 1.00),
    (3, 0.50, 0.214, 0.79),
    (4, 0.20, 0.218, 0.67),
    (3, 0.20, 0.107, 0.58),
    (4, 0.10, 0.177, 0.56),
    (3, 0.17, 0.077, 0.55),
    (4, 0.05, 0.097, 0.47),
];

pub const TABLE2_TOLERANCE: f64 = 0.005;

const LIMIT_TOLERANCE: f64 = 1e-4;

pub fn table2_generate() -> Result<Vec<EfficiencyPoint>> {
    REFERENCE_EFFICIENCY_ROWS
        .iter()
        .map(|&(c, eta, _, _)| {
            Ok(EfficiencyPoint {
                contestants: c,
                eta,
                sigma: sigma_from_eta(eta, c)?,
                delta: 1.0 - pc_limit(c, eta, LIMIT_TOLERANCE)?.value(),
            })
        })
        .collect()
}

/// A generated row next to its reference values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table2Check {
    pub point: EfficiencyPoint,
    pub reference_delta: f64,
    pub reference_sigma: f64,
    pub pass: bool,
}

pub fn table2_compare(points: &[EfficiencyPoint]) -> Vec<Table2Check> {
    points
        .iter()
        .zip(REFERENCE_EFFICIENCY_ROWS)
        .map(|(pt, (_, _, delta, sigma))| Table2Check {
            point: pt.clone(),
            reference_delta: delta,
            reference_sigma: sigma,
            pass: (pt.delta - delta).abs() <= TABLE2_TOLERANCE
                && (pt.sigma - sigma).abs() <= TABLE2_TOLERANCE,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Options {
    pub rounds: usize,
    pub games: usize,
    pub mode: SamplingMode,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for Figure1Options {
    fn default() -> Self {
        Self {
            rounds: 100,
            games: 1000,
            mode: SamplingMode::AllUniform,
            seed: 0,
            tolerance: LIMIT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure1Point {
    pub c: usize,
    pub p: f64,
    pub exact: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub games: usize,
}

/// Exact limit curve plus Monte Carlo games of the best classical team at
/// each grid point. Point `i` uses master seed `derive_seed(seed, i)`.
pub fn figure1_data(c: usize, grid: &[f64], opts: &Figure1Options) -> Result<Vec<Figure1Point>> {
    check_contestants(c)?;
    let team = best_classical_team(c)?;
    grid.iter()
        .enumerate()
        .map(|(i, &p)| {
            let exact: PcLimit = pc_limit(c, p, opts.tolerance)?;
            let cfg = GameConfig::new(c, opts.rounds, p, opts.mode, derive_seed(opts.seed, i))?;
            let mc: MonteCarloSummary = monte_carlo(&cfg, &team, opts.games)?;
            Ok(Figure1Point {
                c,
                p,
                exact: exact.value(),
                mc_mean: mc.mean_win_rate,
                mc_stderr: mc.std_error,
                games: opts.games,
            })
        })
        .collect()
}
