use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::graph::{in_raw, out_raw};
use super::scheme::TwoStageScheme;
use crate::budget::Budget;
use crate::combin::binom;
use crate::error::{Error, Result};
use crate::fsearch::TradeoffTable;
use crate::zcore::Code;

/// Sizes and free-point counts that depend only on the weight of the
/// first-stage word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricProfile {
    pub n1: usize,
    pub n2: usize,
    /// `m[w]` is `M_w`, for `w = 0..=n1`.
    pub m: Vec<u64>,
    /// `f[w]` is `F_w`.
    pub f: Vec<u64>,
}

impl SymmetricProfile {
    /// Takes `F_w` from the table row of size `M_w`.
    pub fn from_table(table: &TradeoffTable, n1: usize, m: Vec<u64>) -> Result<SymmetricProfile> {
        if m.len() != n1 + 1 {
            return Err(Error::Invalid(format!("expected {} per-weight sizes, got {}", n1 + 1, m.len())));
        }
        let f = m
            .iter()
            .map(|&mw| table.free(mw).ok_or(Error::MissingRow { n: table.n, m: mw as usize }))
            .collect::<Result<Vec<_>>>()?;
        Ok(SymmetricProfile { n1, n2: table.n, m, f })
    }

    /// The chain condition `(n1 - w) M_{w+1} <= F_w` for every `w < n1`.
    pub fn check(&self) -> Result<()> {
        for w in 0..self.n1 {
            let lhs = (self.n1 - w) as u64 * self.m[w + 1];
            if lhs > self.f[w] {
                return Err(Error::ChainViolated { w, lhs, rhs: self.f[w] });
            }
        }
        Ok(())
    }

    /// `Σ_w binom(n1, w) M_w`.
    pub fn total(&self) -> u64 {
        self.m.iter().enumerate().map(|(w, &mw)| binom(self.n1 as i64, w as i64) * mw).sum()
    }
}

/// Gives every weight-`w` vertex the table's witness of size `M_w`.
pub fn build_symmetric(profile: &SymmetricProfile, table: &TradeoffTable) -> Result<TwoStageScheme> {
    if table.n != profile.n2 {
        return Err(Error::MissingTable(profile.n2));
    }
    let witness = |mw: u64| {
        table
            .row(mw)
            .map(|r| r.witness.clone())
            .ok_or(Error::MissingRow { n: table.n, m: mw as usize })
    };
    let actual = SymmetricProfile::from_table(table, profile.n1, profile.m.clone())?;
    actual.check()?;
    let by_weight = (0..=profile.n1).map(|w| witness(profile.m[w])).collect::<Result<Vec<Code>>>()?;
    let codes = (0..1u32 << profile.n1).map(|v| by_weight[v.count_ones() as usize].clone()).collect();
    TwoStageScheme::new(profile.n1, profile.n2, codes)?.build_labeling()
}

/// Outcome of [`dp_optimize`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpResult {
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    pub profile: SymmetricProfile,
    pub messages: u64,
    /// Best total for every split tried, as `(n1, n2, messages)`.
    pub splits: Vec<(usize, usize, u64)>,
    /// Second-stage lengths without a table.
    pub missing: Vec<usize>,
}

/// Best symmetric profile for one split: chooses `M_w` stage by stage from
/// `w = n1` down to 0, the state being the chosen `M_w`.
pub fn dp_profile(n1: usize, table: &TradeoffTable) -> SymmetricProfile {
    let fr: Vec<u64> = table.rows.iter().map(|r| r.free).collect();
    let top = fr.len();
    // value[w][k]: best Σ_{w' >= w} binom(n1,w') M_w' given M_w = k.
    let mut value = vec![vec![0u64; top]; n1 + 1];
    let mut choice = vec![vec![0usize; top]; n1 + 1];
    for k in 0..top {
        value[n1][k] = k as u64;
    }
    for w in (0..n1).rev() {
        let c = binom(n1 as i64, w as i64);
        for k in 0..top {
            let cap = fr[k] / (n1 - w) as u64;
            let (best_next, best_val) = (0..top)
                .filter(|&j| j as u64 <= cap)
                .map(|j| (j, value[w + 1][j]))
                .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
            value[w][k] = c * k as u64 + best_val;
            choice[w][k] = best_next;
        }
    }
    let mut k = (0..top).fold(0, |b, k| if value[0][k] > value[0][b] { k } else { b });
    let mut m = Vec::with_capacity(n1 + 1);
    for w in 0..=n1 {
        m.push(k as u64);
        if w < n1 {
            k = choice[w][k];
        }
    }
    let f = m.iter().map(|&x| fr[x as usize]).collect();
    SymmetricProfile { n1, n2: table.n, m, f }
}

/// Best symmetric scheme over all splits `n = n1 + n2` with a table for `n2`.
/// Ties go to the smaller `n1`.
pub fn dp_optimize(n: usize, tables: &BTreeMap<usize, TradeoffTable>) -> Result<DpResult> {
    let mut best: Option<DpResult> = None;
    let mut splits = Vec::new();
    let mut missing = Vec::new();
    for n1 in 1..n {
        let n2 = n - n1;
        let Some(table) = tables.get(&n2) else {
            missing.push(n2);
            continue;
        };
        let profile = dp_profile(n1, table);
        let messages = profile.total();
        splits.push((n1, n2, messages));
        if best.as_ref().map_or(true, |b| messages > b.messages) {
            best = Some(DpResult { n, n1, n2, profile, messages, splits: Vec::new(), missing: Vec::new() });
        }
    }
    let mut best = best.ok_or(Error::MissingTable(missing.first().copied().unwrap_or(0)))?;
    best.splits = splits;
    best.missing = missing;
    Ok(best)
}

/// Moves per split when [`general_optimize`] gets an unbounded budget.
pub const DEFAULT_MOVES: u64 = 100_000;

/// Per-vertex local search over `M(v)` (with `F(v)` the table optimum for
/// that size) under the per-vertex load condition, started from the best
/// symmetric profile of every split. Deterministic for a fixed seed and
/// node budget; the budget is shared equally between splits.
pub fn general_optimize(
    n: usize,
    tables: &BTreeMap<usize, TradeoffTable>,
    budget: Budget,
    seed: u64,
) -> Result<TwoStageScheme> {
    let dp = dp_optimize(n, tables)?;
    let nsplits = dp.splits.len() as u64;
    let nodes = match (budget.max_nodes, budget.deadline) {
        (None, None) => Some(DEFAULT_MOVES * nsplits),
        (k, _) => k,
    };
    let per = Budget { max_nodes: nodes.map(|k| (k / nsplits.max(1)).max(1)), deadline: budget.deadline };
    let mut best: Option<(u64, usize, Vec<u64>)> = None;
    for &(n1, n2, _) in &dp.splits {
        let table = &tables[&n2];
        let start = dp_profile(n1, table);
        let mut ls = VertexSearch::new(n1, table, &start, seed ^ (n1 as u64) << 32);
        let (total, sizes) = ls.run(per);
        if best.as_ref().map_or(true, |b| total > b.0) {
            best = Some((total, n1, sizes));
        }
    }
    let (_, n1, sizes) = best.expect("dp_optimize found a split");
    let table = &tables[&(n - n1)];
    let codes = sizes.iter().map(|&k| table.rows[k as usize].witness.clone()).collect();
    TwoStageScheme::new(n1, n - n1, codes)?.build_labeling()
}

struct VertexSearch {
    ins: Vec<Vec<u32>>,
    outs: Vec<Vec<u32>>,
    free: Vec<u64>,
    m: Vec<u64>,
    load: Vec<u64>,
    total: u64,
    rng: ChaCha8Rng,
}

impl VertexSearch {
    fn new(n1: usize, table: &TradeoffTable, start: &SymmetricProfile, seed: u64) -> VertexSearch {
        let nv = 1usize << n1;
        let mut s = VertexSearch {
            ins: (0..nv as u32).map(|v| in_raw(n1, v)).collect(),
            outs: (0..nv as u32).map(out_raw).collect(),
            free: table.rows.iter().map(|r| r.free).collect(),
            m: (0..nv as u32).map(|v| start.m[v.count_ones() as usize]).collect(),
            load: vec![0; nv],
            total: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        s.recompute();
        s
    }

    fn recompute(&mut self) {
        self.total = self.m.iter().sum();
        for v in 0..self.m.len() {
            self.load[v] = self.ins[v].iter().map(|&u| self.m[u as usize]).sum();
        }
    }

    fn ok(&self, v: usize) -> bool {
        self.load[v] <= self.free[self.m[v] as usize]
    }

    fn set(&mut self, v: usize, k: u64) {
        let old = self.m[v];
        self.m[v] = k;
        self.total = self.total + k - old;
        for i in 0..self.outs[v].len() {
            let w = self.outs[v][i] as usize;
            self.load[w] = self.load[w] + k - old;
        }
    }

    fn can_raise(&self, v: usize) -> bool {
        let k = self.m[v] as usize + 1;
        k < self.free.len()
            && self.load[v] <= self.free[k]
            && self.outs[v].iter().all(|&w| self.load[w as usize] < self.free[self.m[w as usize] as usize])
    }

    /// Lowers sizes until every vertex satisfies its load condition.
    /// Lowering never breaks another vertex, so this terminates.
    fn repair(&mut self, touched: &[usize], keep: usize) {
        let mut stack: Vec<usize> = touched.to_vec();
        while let Some(y) = stack.pop() {
            while !self.ok(y) {
                let lowerable: Vec<usize> = self.ins[y]
                    .iter()
                    .map(|&u| u as usize)
                    .filter(|&u| u != keep && self.m[u] > 0)
                    .collect();
                let pick_self = y != keep && self.m[y] > 0 && (lowerable.is_empty() || self.rng.gen_bool(0.5));
                if pick_self {
                    self.set(y, self.m[y] - 1);
                } else if let Some(&u) = lowerable.get(self.rng.gen_range(0..lowerable.len().max(1))) {
                    self.set(u, self.m[u] - 1);
                } else {
                    // Only `keep` is left to lower.
                    self.set(keep, self.m[keep] - 1);
                }
            }
        }
    }

    fn raise_all(&mut self) {
        let nv = self.m.len();
        let offset = self.rng.gen_range(0..nv);
        for i in 0..nv {
            let v = (i + offset) % nv;
            while self.can_raise(v) {
                self.set(v, self.m[v] + 1);
            }
        }
    }

    fn run(&mut self, budget: Budget) -> (u64, Vec<u64>) {
        let mut meter = budget.meter();
        let nv = self.m.len();
        let top = self.free.len() as u64 - 1;
        self.raise_all();
        let mut best = (self.total, self.m.clone());
        let mut current = best.clone();
        let mut temp = 1.0f64;
        while meter.tick() {
            let v = self.rng.gen_range(0..nv);
            let k = self.rng.gen_range(0..=top);
            if k == self.m[v] {
                continue;
            }
            self.set(v, k);
            let mut touched = vec![v];
            touched.extend(self.outs[v].iter().map(|&w| w as usize));
            self.repair(&touched, v);
            self.raise_all();
            let (cur, _) = &current;
            let accept = self.total >= *cur || self.rng.gen::<f64>() < ((self.total as f64 - *cur as f64) / temp).exp();
            if accept {
                current = (self.total, self.m.clone());
                if self.total > best.0 {
                    best = current.clone();
                }
            } else {
                self.m = current.1.clone();
                self.recompute();
            }
            temp = (temp * 0.9999).max(0.05);
        }
        best
    }
}
