use serde::{Deserialize, Serialize};

use super::realize::{Realized, Realizer, Space};
use crate::budget::Budget;
use crate::cwbounds::CwTable;
use crate::lpbound::{distributions_with_cover, f_upper_bound_within};
use crate::zcore::{free_count_raw, Code};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    /// The witness is proved to have the maximum number of free points.
    Optimal,
    /// The budget ran out; the witness (if any) is only a lower bound.
    Incomplete,
    /// No valid code of this size exists.
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    pub n: usize,
    pub m: u64,
    /// Free points of `code`.
    pub free: Option<u64>,
    pub code: Option<Code>,
    /// Upper bound from the distribution constraints.
    pub upper: Option<i64>,
    pub status: SearchStatus,
    pub nodes: u64,
}

/// Largest length for which [`exact_search`] is expected to finish.
pub const EXACT_MAX_LEN: usize = 8;

/// Maximum free points over single-error codes of length `n` and size `m`.
///
/// Distributions allowed by the linear constraints are tried in order of
/// increasing coverage; the first coverage level at which some distribution
/// is realised by an actual code is optimal.
pub fn exact_search(n: usize, m: u64, budget: Budget) -> ExactResult {
    exact_search_with(n, m, &CwTable::johnson_only(), budget)
}

pub fn exact_search_with(n: usize, m: u64, cw: &CwTable, budget: Budget) -> ExactResult {
    let mut res = ExactResult { n, m, free: None, code: None, upper: None, status: SearchStatus::Incomplete, nodes: 0 };
    let size = 1u64 << n;
    if m == 0 {
        res.free = Some(size);
        res.code = Code::empty(n, 1).ok();
        res.upper = Some(size as i64);
        res.status = SearchStatus::Optimal;
        return res;
    }
    let clock = Budget { max_nodes: None, deadline: budget.deadline };
    let bound = f_upper_bound_within(n, m, 1, cw, clock);
    if !bound.complete {
        return res;
    }
    let Some(best) = bound.value else {
        res.status = SearchStatus::Infeasible;
        return res;
    };
    res.upper = Some(best);

    let space = Space::new(n);
    let mut meter = budget.meter();
    let mut cover = size - best as u64;
    while cover <= size {
        let (dists, complete) = distributions_with_cover(n, m, 1, cw, cover, clock);
        if !complete {
            break;
        }
        for d in &dists {
            match Realizer::new(&space, &mut meter).realize(&d.z) {
                Realized::Found(bits) => {
                    let free = free_count_raw(n, &bits);
                    debug_assert_eq!(free, size - cover);
                    res.free = Some(free);
                    res.code = Some(Code::from_sorted_raw(n, 1, &bits));
                    res.status = SearchStatus::Optimal;
                    res.nodes = meter.used();
                    return res;
                }
                Realized::Impossible => {}
                Realized::OutOfBudget => {
                    res.nodes = meter.used();
                    return res;
                }
            }
        }
        cover += 1;
    }
    res.nodes = meter.used();
    // Every distribution failed: only possible if the constraints admit
    // distributions no code realises at any coverage.
    if cover > size {
        res.status = SearchStatus::Infeasible;
    }
    res
}
