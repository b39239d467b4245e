//! Searches for codes with the most free points.

mod exact;
mod heuristic;
mod nested;
mod realize;
mod tradeoff;

pub use exact::{exact_search, exact_search_with, ExactResult, SearchStatus, EXACT_MAX_LEN};
pub use heuristic::{heuristic_search, HeuristicResult};
pub use nested::{nested_family, NestedFamily, DEFAULT_ROUNDS};
pub use tradeoff::{tradeoff_table, TradeoffRow, TradeoffTable};
