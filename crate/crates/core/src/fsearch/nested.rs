use super::exact::{exact_search, SearchStatus, EXACT_MAX_LEN};
use super::heuristic::{heuristic_search, vt_start, weighted_search};
use super::realize::Space;
use crate::budget::Budget;
use crate::cwbounds::CwTable;
use crate::lpbound::feasible_max_size;
use crate::zcore::{free_count_raw, Code};

/// Local-search rounds used when [`nested_family`] gets an unbounded budget.
pub const DEFAULT_ROUNDS: u64 = 400_000;

/// Codes `C_1 ⊂ C_2 ⊂ … ⊂ C_max`, `|C_k| = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedFamily {
    pub n: usize,
    /// `chain[k - 1]` is `C_k`.
    pub chain: Vec<Code>,
    /// True when the largest code was proved F-optimal by exact search.
    pub top_optimal: bool,
}

impl NestedFamily {
    pub fn max_size(&self) -> usize {
        self.chain.len()
    }

    pub fn prefix(&self, k: usize) -> Option<&Code> {
        k.checked_sub(1).and_then(|i| self.chain.get(i))
    }

    /// Free points of `C_1, C_2, …`.
    pub fn free_counts(&self) -> Vec<u64> {
        self.chain.iter().map(|c| free_count_raw(self.n, &c.bits())).collect()
    }
}

/// A nested family built from a large code with many free points by
/// repeatedly deleting a codeword of maximal weight (the deletion that adds
/// the most free points).
///
/// For `n <= 8` the top code is an exact-search optimum of maximal size; for
/// longer lengths it comes from local search on (size, free points), and the
/// node budget is split between reaching maximal size and improving coverage.
pub fn nested_family(n: usize, budget: Budget, seed: u64) -> NestedFamily {
    let (top, top_optimal) = top_code(n, budget, seed);
    let mut chain = Vec::with_capacity(top.len());
    let mut words = top;
    while !words.is_empty() {
        chain.push(Code::from_sorted_raw(n, 1, &words));
        let i = (0..words.len()).max_by_key(|&i| (words[i].count_ones(), words[i])).unwrap();
        words.remove(i);
    }
    chain.reverse();
    NestedFamily { n, chain, top_optimal }
}

fn top_code(n: usize, budget: Budget, seed: u64) -> (Vec<u32>, bool) {
    if n <= EXACT_MAX_LEN {
        let m = feasible_max_size(n, 1, &CwTable::johnson_only());
        let r = exact_search(n, m, budget);
        if let (Some(code), SearchStatus::Optimal) = (&r.code, r.status) {
            return (code.bits(), true);
        }
    }
    // Local search never finishes by itself; an unbounded budget gets a default.
    let nodes = match (budget.max_nodes, budget.deadline) {
        (None, None) => Some(DEFAULT_ROUNDS),
        (k, _) => k,
    };
    let half = Budget { max_nodes: nodes.map(|k| k / 2), deadline: budget.deadline };
    let size_first = heuristic_search(n, usize::MAX, half, seed).code.bits();
    let space = Space::new(n);
    let mut meter = half.meter();
    let start = if size_first.is_empty() { vt_start(n) } else { size_first };
    (weighted_search(&space, &start, seed, &mut meter), false)
}
