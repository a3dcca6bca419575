//! Concrete teams: the classical voluntary/forced strategy, the GHZ team
//! with lossy detectors, and an exhaustive search over classical strategies.

mod classical;
mod detector;
mod oracle;
mod quantum_team;

pub use classical::{
    alice_decide_classical, best_classical_team, classical_message, ClassicalStrategySpec,
};
pub use detector::{eta_from_sigma, p_exp_original, sigma_from_eta, DetectorModel};
pub use oracle::{
    brute_force_oracle, brute_force_oracle_with_bound, CertainWinSearch, ForcedOptimum,
    MuComparison, OracleReport, DEFAULT_SEARCH_BOUND,
};
pub use quantum_team::{quantum_team, QuantumTeam};
