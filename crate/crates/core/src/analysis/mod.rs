//! Exact evaluation of the classical winning probability, its large-N
//! limit, the efficiency table, the figure dataset, and a dynamic-programming
//! cross-check of the explicit strategy.

mod binomial;
mod bound;
mod datasets;
mod dp;

pub use binomial::{log_binomial, NeumaierSum};
pub use bound::{mu, pc_exact, pc_limit, pc_limit_with, LimitOptions, PcEvaluation, PcLimit, Ratio};
pub use datasets::{
    figure1_data, std_error, table2_compare, table2_generate, EfficiencyPoint, Figure1Options,
    Figure1Point, Table2Check, REFERENCE_EFFICIENCY_ROWS, TABLE2_TOLERANCE,
};
pub use dp::{strategy_dp_oracle, DP_ROUND_LIMIT};
