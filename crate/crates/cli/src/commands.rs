//! Subcommand implementations. Each one computes into an [`OutputSet`] and
//! reports on stdout; nothing touches the filesystem until `main` commits.

use std::fmt::{self, Write as _};
use std::path::PathBuf;

use anyhow::{Context, Result};
use gmn_core::analysis::{
    figure1_data, pc_exact, pc_limit_with, std_error, table2_compare, table2_generate, Figure1Options,
    LimitOptions, PcEvaluation,
};
use gmn_core::game::{combination_census, io, play_game, BalanceReport, GameConfig, Summary, TeamStrategy};
use gmn_core::rng::derive_seed;
use gmn_core::strategies::{
    best_classical_team, brute_force_oracle_with_bound, quantum_team, ClassicalStrategySpec, DetectorModel,
    DEFAULT_SEARCH_BOUND,
};
use gmn_core::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{CensusArgs, ExactArgs, Figure1Args, Format, OracleArgs, Preset, SimulateArgs, Table2Args};
use crate::output::OutputSet;

/// A rejected flag combination; reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Result of a command that ran to completion but wants a specific exit
/// code (non-convergence still writes its log).
pub struct Completed {
    pub outputs: OutputSet,
    pub exit_code: u8,
}

impl From<OutputSet> for Completed {
    fn from(outputs: OutputSet) -> Self {
        Completed { outputs, exit_code: 0 }
    }
}

// ---------------------------------------------------------------- simulate

const HEADLINE: (usize, f64, f64) = (4, 0.05, 0.47);

#[derive(Debug, Clone, PartialEq)]
enum TeamKind {
    Classical,
    Quantum,
    Custom(PathBuf),
}

fn parse_team(s: &str) -> Result<TeamKind> {
    match s {
        "classical" => Ok(TeamKind::Classical),
        "quantum" => Ok(TeamKind::Quantum),
        _ => match s.strip_prefix("custom:") {
            Some(path) if !path.is_empty() => Ok(TeamKind::Custom(PathBuf::from(path))),
            _ => Err(usage(format!("unknown team '{s}': expected classical, quantum or custom:<path>"))),
        },
    }
}

impl SimulateArgs {
    /// Fills every optional flag from the preset (if any) and then from the
    /// defaults, so the manifest records the exact values used.
    pub fn resolve(&self) -> Result<SimulateArgs> {
        let (c, p, sigma) = HEADLINE;
        let preset = self.preset.map(|Preset::Headline| ());
        let mut out = self.clone();
        out.contestants = Some(self.contestants.unwrap_or(c));
        out.forced_fraction = Some(self.forced_fraction.unwrap_or(p));
        let team = self.team.clone().unwrap_or_else(|| "quantum".into());
        let kind = parse_team(&team)?;
        if preset.is_some() && kind != TeamKind::Quantum {
            return Err(usage("--preset headline runs the quantum team; drop --team"));
        }
        match kind {
            TeamKind::Quantum => out.sigma = Some(self.sigma.unwrap_or(sigma)),
            _ if self.sigma.is_some() => {
                return Err(usage(format!("--sigma only applies to the quantum team, not '{team}'")));
            }
            _ => {}
        }
        out.team = Some(team);
        if out.games == 0 {
            return Err(usage("--games must be at least 1"));
        }
        Ok(out)
    }
}

#[derive(Serialize)]
struct TeamDescription {
    kind: String,
    sigma: Option<f64>,
    eta: Option<f64>,
}

#[derive(Serialize)]
struct SimulationSummary<'a> {
    schema_version: u32,
    config: &'a GameConfig,
    team: TeamDescription,
    games: usize,
    games_with_plays: usize,
    rounds_played: usize,
    forced_rounds: usize,
    wins: usize,
    /// Wins over played rounds, pooled across games.
    win_rate: Option<f64>,
    /// Binomial standard error of `win_rate`.
    std_error: Option<f64>,
    /// Mean of the per-game win rates (games with no plays excluded).
    mean_game_win_rate: Option<f64>,
    /// Standard error of that mean; needs at least two games.
    game_std_error: Option<f64>,
    /// Chi-square uniformity audit of the played assignments, pooled.
    balance: Option<BalanceReport>,
}

#[derive(Serialize)]
struct GameRow {
    game: usize,
    seed: u64,
    rounds_played: usize,
    forced_rounds: usize,
    wins: usize,
    win_rate: Option<f64>,
}

fn run_games<T: TeamStrategy>(
    cfg: &GameConfig,
    team: &T,
    games: usize,
    transcript: Option<Format>,
) -> Result<Vec<(Summary, Option<Vec<u8>>)>> {
    (0..games)
        .into_par_iter()
        .map(|g| {
            let t = play_game(&cfg.with_seed(derive_seed(cfg.seed, g)), team)?;
            let bytes = match transcript {
                None => None,
                Some(Format::Csv) => {
                    let mut buf = Vec::new();
                    io::write_transcript_csv(&t, &mut buf)?;
                    Some(buf)
                }
                Some(Format::Json) => {
                    let mut buf = Vec::new();
                    io::write_transcript_json(&t, &mut buf)?;
                    buf.push(b'\n');
                    Some(buf)
                }
            };
            Ok((t.summary, bytes))
        })
        .collect()
}

pub fn simulate(args: &SimulateArgs) -> Result<Completed> {
    let c = args.contestants.expect("resolved");
    let p = args.forced_fraction.expect("resolved");
    let cfg = GameConfig::new(c, args.rounds, p, args.mode, args.seed)?;
    let transcript = (!args.summary_only).then_some(args.format);
    let kind = parse_team(args.team.as_deref().expect("resolved"))?;
    let (results, team) = match &kind {
        TeamKind::Quantum => {
            let detector = DetectorModel::new(args.sigma.expect("resolved"), c)?;
            let team = quantum_team(c, detector)?;
            let desc = TeamDescription { kind: "quantum".into(), sigma: Some(detector.sigma()), eta: Some(detector.eta()) };
            (run_games(&cfg, &team, args.games, transcript)?, desc)
        }
        TeamKind::Classical => {
            let team = best_classical_team(c)?;
            (run_games(&cfg, &team, args.games, transcript)?, TeamDescription { kind: "classical".into(), sigma: None, eta: None })
        }
        TeamKind::Custom(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let team: ClassicalStrategySpec = text.parse()?;
            let kind = format!("custom:{}", path.display());
            (run_games(&cfg, &team, args.games, transcript)?, TeamDescription { kind, sigma: None, eta: None })
        }
    };

    let mut outputs = OutputSet::default();
    let ext = match args.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let width = (args.games - 1).to_string().len().max(5);
    let mut rows = Vec::with_capacity(results.len());
    let mut pooled: Option<Vec<u64>> = None;
    let (mut played, mut forced, mut wins) = (0, 0, 0);
    for (g, (s, bytes)) in results.into_iter().enumerate() {
        if let Some(bytes) = bytes {
            let name = if args.games == 1 {
                format!("transcript.{ext}")
            } else {
                format!("transcripts/game-{g:0width$}.{ext}")
            };
            outputs.add(name, bytes);
        }
        if let Some(b) = &s.balance {
            let acc = pooled.get_or_insert_with(|| vec![0; b.counts.len()]);
            acc.iter_mut().zip(&b.counts).for_each(|(a, k)| *a += k);
        }
        played += s.rounds_played;
        forced += s.forced_rounds;
        wins += s.wins;
        rows.push(GameRow {
            game: g,
            seed: derive_seed(args.seed, g),
            rounds_played: s.rounds_played,
            forced_rounds: s.forced_rounds,
            wins: s.wins,
            win_rate: s.win_rate,
        });
    }
    let rates: Vec<f64> = rows.iter().filter_map(|r| r.win_rate).collect();
    let win_rate = (played > 0).then(|| wins as f64 / played as f64);
    let mean = (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64);
    let game_std_error = mean.filter(|_| rates.len() > 1).map(|m| {
        let var = rates.iter().map(|r| (r - m).powi(2)).sum::<f64>() / (rates.len() - 1) as f64;
        (var / rates.len() as f64).sqrt()
    });
    let summary = SimulationSummary {
        schema_version: io::SCHEMA_VERSION,
        config: &cfg,
        team,
        games: args.games,
        games_with_plays: rates.len(),
        rounds_played: played,
        forced_rounds: forced,
        wins,
        win_rate,
        std_error: win_rate.map(|w| std_error(w, played)).transpose()?,
        mean_game_win_rate: mean,
        game_std_error,
        balance: pooled.map(|counts| BalanceReport::from_counts(c, counts)).transpose()?,
    };

    println!("games: {}  played rounds: {played} ({forced} forced)  wins: {wins}", args.games);
    match (summary.win_rate, summary.std_error) {
        (Some(w), Some(se)) => println!("win rate: {w:.6} ± {se:.6}"),
        _ => println!("win rate: n/a (no rounds played)"),
    }
    if let Some(b) = &summary.balance {
        println!("balance audit: chi-square {:.2} on {} dof, p = {:.4}", b.chi_square, b.degrees_of_freedom, b.p_value);
    }
    outputs.add_json("summary.json", &summary)?;
    if args.games > 1 {
        outputs.add_csv("games.csv", &rows)?;
    }
    Ok(outputs.into())
}

// ------------------------------------------------------------------- exact

#[derive(Serialize)]
struct ExactRow {
    c: usize,
    p: f64,
    #[serde(rename = "N")]
    rounds: u64,
    quota: u64,
    value: f64,
    converged: bool,
    truncation_error: Option<f64>,
}

#[derive(Serialize)]
struct ConvergenceRow {
    c: usize,
    p: f64,
    #[serde(rename = "N")]
    rounds: u64,
    value: f64,
}

fn exact_row(e: &PcEvaluation) -> ExactRow {
    ExactRow {
        c: e.contestants,
        p: e.forced_fraction,
        rounds: e.rounds,
        quota: e.quota,
        value: e.value,
        converged: e.converged,
        truncation_error: e.truncation_error,
    }
}

pub fn exact(args: &ExactArgs) -> Result<Completed> {
    let (c, p) = (args.contestants, args.forced_fraction);
    let mut outputs = OutputSet::default();
    if let Some(n) = args.rounds {
        let e = pc_exact(c, p, n)?;
        println!("P_C(c={c}, p={p}, N={n}) = {:.6}", e.value);
        outputs.add_csv("exact.csv", &[exact_row(&e)])?;
        return Ok(outputs.into());
    }
    let opts = LimitOptions { tolerance: args.tolerance, max_exponent: args.max_exponent, ..LimitOptions::default() };
    let log = |record: &[(u64, f64)]| -> Vec<ConvergenceRow> {
        record.iter().map(|&(rounds, value)| ConvergenceRow { c, p, rounds, value }).collect()
    };
    match pc_limit_with(c, p, opts) {
        Ok(limit) => {
            let e = &limit.evaluation;
            println!(
                "P_C(c={c}, p={p}) = {:.6}  (N = {}, last change {:.1e})",
                e.value,
                e.rounds,
                e.truncation_error.unwrap_or(0.0)
            );
            outputs.add_csv("exact.csv", &[exact_row(e)])?;
            outputs.add_csv("convergence.csv", &log(&limit.record))?;
            Ok(outputs.into())
        }
        Err(Error::NonConvergence { tolerance, last_rounds, record }) => {
            eprintln!("error: no convergence to {tolerance:e} by N = {last_rounds}");
            eprintln!("convergence log (N, value):");
            for (n, v) in &record {
                eprintln!("  {n:>9}  {v:.10}");
            }
            outputs.add_csv("convergence.csv", &log(&record))?;
            Ok(Completed { outputs, exit_code: 3 })
        }
        Err(e) => Err(e.into()),
    }
}

// ------------------------------------------------------------------ table2

#[derive(Serialize)]
struct Table2Row {
    c: usize,
    eta: f64,
    sigma: f64,
    delta: f64,
}

pub fn table2(_args: &Table2Args) -> Result<Completed> {
    let points = table2_generate()?;
    let checks = table2_compare(&points);
    let mut outputs = OutputSet::default();
    let rows: Vec<Table2Row> = points
        .iter()
        .map(|pt| Table2Row { c: pt.contestants, eta: pt.eta, sigma: pt.sigma, delta: pt.delta })
        .collect();
    outputs.add_csv("table2.csv", &rows)?;

    let mut text = String::new();
    writeln!(text, "{:>2} {:>6} {:>8} {:>8} {:>8} {:>8}  result", "c", "eta", "delta", "ref", "sigma", "ref")?;
    for ch in &checks {
        writeln!(
            text,
            "{:>2} {:>6.2} {:>8.4} {:>8.3} {:>8.4} {:>8.2}  {}",
            ch.point.contestants,
            ch.point.eta,
            ch.point.delta,
            ch.reference_delta,
            ch.point.sigma,
            ch.reference_sigma,
            if ch.pass { "PASS" } else { "FAIL" }
        )?;
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    writeln!(text, "{passed}/{} rows within ±0.005", checks.len())?;
    print!("{text}");
    outputs.add("table2_comparison.txt", text.into_bytes());
    Ok(outputs.into())
}

// ----------------------------------------------------------------- figure1

/// `start:stop:step` (inclusive of `stop` up to rounding) or `a,b,c`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || usage(format!("bad --grid '{s}': use start:stop:step or a comma-separated list"));
    let grid: Vec<f64> = if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        // round to the step's precision so 0.1 + 0.2 prints as 0.3
        (0..=n).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if grid.is_empty() || grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(usage(format!("--grid values must lie in [0, 1]: '{s}'")));
    }
    Ok(grid)
}

pub fn figure1(args: &Figure1Args) -> Result<Completed> {
    let grid = parse_grid(&args.grid)?;
    let opts = Figure1Options {
        rounds: args.rounds,
        games: args.games,
        mode: args.mode,
        seed: args.seed,
        tolerance: args.tolerance,
    };
    let points = figure1_data(args.contestants, &grid, &opts)?;
    for pt in &points {
        println!("p = {:<6} exact {:.5}  MC {:.5} ± {:.5}", pt.p, pt.exact, pt.mc_mean, pt.mc_stderr);
    }
    let mut outputs = OutputSet::default();
    outputs.add_csv("figure1.csv", &points)?;
    Ok(outputs.into())
}

// ------------------------------------------------------------------ oracle

#[derive(Serialize)]
struct OracleRow {
    c: usize,
    forced_optimum: f64,
    forced_wins: usize,
    variations: usize,
    certain_win_size: usize,
    mu: f64,
    rate_all_uniform: f64,
    rate_integer_uniform: f64,
}

pub fn oracle(args: &OracleArgs) -> Result<Completed> {
    let report = brute_force_oracle_with_bound(args.contestants, args.bound.unwrap_or(DEFAULT_SEARCH_BOUND))?;
    let f = &report.forced;
    let m = &report.mu;
    println!("forced-play optimum: {}/{} = {:.4}", f.wins, f.variations, f.rate);
    println!("largest certain-win product set: {} assignments", report.certain_win.size);
    for sets in &report.certain_win.best_sets {
        let shown: Vec<String> = sets
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        println!("  {}", shown.join(" x "));
    }
    println!(
        "certain-win rate: {:.6} over all deals, {:.6} over integer deals; closed-form mu = {}/{} = {:.6}",
        m.rate_all_uniform, m.rate_integer_uniform, m.mu_numerator, m.mu_denominator, m.mu
    );
    let mut outputs = OutputSet::default();
    outputs.add_json("oracle.json", &report)?;
    outputs.add_csv(
        "oracle.csv",
        &[OracleRow {
            c: report.contestants,
            forced_optimum: f.rate,
            forced_wins: f.wins,
            variations: f.variations,
            certain_win_size: report.certain_win.size,
            mu: m.mu,
            rate_all_uniform: m.rate_all_uniform,
            rate_integer_uniform: m.rate_integer_uniform,
        }],
    )?;
    Ok(outputs.into())
}

// ------------------------------------------------------------------ census

#[derive(Serialize)]
struct CensusRow {
    combination: String,
    total: u32,
    variations: usize,
}

pub fn census(args: &CensusArgs) -> Result<Completed> {
    let rows: Vec<CensusRow> = combination_census(args.contestants)?
        .into_iter()
        .map(|r| CensusRow {
            combination: format!("{{{}}}", r.counts.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")),
            total: r.total,
            variations: r.variations,
        })
        .collect();
    let odd: usize = rows.iter().filter(|r| r.total % 2 == 1).map(|r| r.variations).sum();
    let all: usize = rows.iter().map(|r| r.variations).sum();
    for r in &rows {
        println!("{:<24} {:>2} {:>3}", r.combination, r.total, r.variations);
    }
    println!("{} combinations, {all} variations: {odd} odd, {} even", rows.len(), all - odd);
    let mut outputs = OutputSet::default();
    outputs.add_csv("census.csv", &rows)?;
    Ok(outputs.into())
}
