//! Upper bound on the number of free points of an `(n, M, t)` code.
//!
//! A code's weight distribution `z_0..z_n` must satisfy a family of linear
//! packing inequalities; maximising `2^n - sum z_i (i + 1)` over all integer
//! distributions that satisfy them bounds the free points of every code of
//! that size. Everything here is exact integer arithmetic.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Meter};
use crate::combin::binom;
use crate::cwbounds::CwTable;
use crate::zcore::WeightDistribution;

/// The families of inequalities, numbered as they are usually listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Item {
    /// `z_0 = 1`, `z_1 = 0`.
    Anchor,
    /// Shadow packing around weight `w`.
    Packing,
    /// Constant-weight embedding of the low weights.
    LowWeights,
    /// Constant-weight embedding of the high weights.
    HighWeights,
    /// Packing with the floor correction on `z_{w+t-s+1}`.
    FloorUp,
    /// Packing with the floor correction on `z_{w-s-1}`.
    FloorDown,
    /// `sum z_i = M`.
    Size,
    /// Distribution has the wrong number of entries.
    Shape,
}

impl Item {
    pub fn number(&self) -> &'static str {
        match self {
            Item::Anchor => "2",
            Item::Packing => "3",
            Item::LowWeights => "4",
            Item::HighWeights => "5",
            Item::FloorUp => "6a",
            Item::FloorDown => "6b",
            Item::Size => "7",
            Item::Shape => "shape",
        }
    }
}

/// One linear inequality `sum coef * z_idx <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub item: Item,
    pub label: String,
    pub terms: Vec<(usize, i64)>,
    pub rhs: i64,
}

impl Row {
    fn new(item: Item, label: String, raw: Vec<(usize, i64)>, rhs: i64) -> Row {
        let mut terms: Vec<(usize, i64)> = Vec::new();
        for (i, c) in raw {
            if c == 0 {
                continue;
            }
            match terms.iter_mut().find(|(j, _)| *j == i) {
                Some(t) => t.1 += c,
                None => terms.push((i, c)),
            }
        }
        terms.sort();
        Row { item, label, terms, rhs }
    }

    pub fn lhs(&self, z: &[u64]) -> i64 {
        self.terms.iter().map(|&(i, c)| c * z[i] as i64).sum()
    }

    fn nonnegative(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c >= 0)
    }
}

fn packing_terms(n: i64, t: i64, s: i64, w: i64) -> Vec<(usize, i64)> {
    let mut terms = Vec::new();
    for i in 1..=s {
        terms.push(((w - i) as usize, binom(n - w + i, i) as i64));
    }
    for j in 0..=(t - s) {
        terms.push(((w + j) as usize, binom(w + j, j) as i64));
    }
    terms
}

/// The inequality rows of families 3, 4 and 5 for length `n` and `t` errors.
///
/// These are the rows used by [`check_constraints`] and the bound. The
/// floor-corrected family is built separately by [`floor_corrected_rows`].
pub fn constraint_rows(n: usize, t: usize, cw: &CwTable) -> Vec<Row> {
    let d = 2 * t + 2;
    let (ni, ti) = (n as i64, t as i64);
    let mut rows = Vec::new();
    for w in (ti + 1)..(ni - ti) {
        for s in 0..=ti {
            let rhs = binom(ni, w) as i64;
            rows.push(Row::new(Item::Packing, format!("3[s={},w={}]", s, w), packing_terms(ni, ti, s, w), rhs));
        }
    }
    for r in 0..=n {
        for s in 0..=r {
            let rhs = cw.upper(n + r - s, d, r) as i64;
            let low: Vec<(usize, i64)> =
                (s..=r).map(|j| (j, cw.lower(r - s, d, r - j) as i64)).collect();
            let high: Vec<(usize, i64)> =
                (s..=r).map(|j| (n - j, cw.lower(r - s, d, r - j) as i64)).collect();
            rows.push(Row::new(Item::LowWeights, format!("4[s={},r={}]", s, r), low, rhs));
            rows.push(Row::new(Item::HighWeights, format!("5[s={},r={}]", s, r), high, rhs));
        }
    }
    rows
}

/// The two floor-corrected packing families, transcribed term for term.
///
/// In this form they reject codes that exist: at `n = 6` the size-12 code
/// with distribution `1+0+3+4+3+0+1` gives `z_2 + 3 z_3 + 4 z_4 = 27` on
/// `6a[s=0,w=2]`, against a right-hand side of 15. They are therefore
/// evaluated only as diagnostics ([`floor_row_report`]) and never prune.
pub fn floor_corrected_rows(n: usize, t: usize) -> Vec<Row> {
    let (ni, ti) = (n as i64, t as i64);
    let mut rows = Vec::new();
    for w in (ti + 1)..(ni - ti) {
        for s in 0..=ti {
            let rhs = binom(ni, w) as i64;

            let mut up = packing_terms(ni, ti, s, w);
            let top = w + ti - s + 1;
            let coef = binom(top, w) as i64 - binom(ti + 1, ti - s + 1) as i64 * (top / (ti + 1));
            up.push((top as usize, coef));
            rows.push(Row::new(Item::FloorUp, format!("6a[s={},w={}]", s, w), up, rhs));

            let mut down = packing_terms(ni, ti, s, w);
            let span = ni - w + s + 1;
            let coef = binom(span, s + 1) as i64 - binom(ti + 1, ti - s) as i64 * (span / (ti + 1));
            down.push(((w - s - 1) as usize, coef));
            rows.push(Row::new(Item::FloorDown, format!("6b[s={},w={}]", s, w), down, rhs));
        }
    }
    rows
}

/// Rows of [`floor_corrected_rows`] that `z` exceeds.
pub fn floor_row_report(z: &WeightDistribution, t: usize) -> Vec<Violation> {
    floor_corrected_rows(z.n, t)
        .into_iter()
        .filter_map(|row| {
            let lhs = row.lhs(&z.z);
            (lhs > row.rhs).then(|| Violation { item: row.item, label: row.label, lhs, rhs: row.rhs })
        })
        .collect()
}

/// A violated constraint with its two sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub item: Item,
    pub label: String,
    pub lhs: i64,
    pub rhs: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} > {}", self.label, self.lhs, self.rhs)
    }
}

/// Every violated constraint for distribution `z` at size `m`; empty iff feasible.
pub fn check_constraints(z: &WeightDistribution, n: usize, m: u64, t: usize, cw: &CwTable) -> Vec<Violation> {
    let mut out = Vec::new();
    if z.z.len() != n + 1 {
        out.push(Violation {
            item: Item::Shape,
            label: format!("expected {} entries", n + 1),
            lhs: z.z.len() as i64,
            rhs: n as i64 + 1,
        });
        return out;
    }
    if z.z[0] != 1 {
        out.push(Violation { item: Item::Anchor, label: "2[z_0=1]".into(), lhs: z.z[0] as i64, rhs: 1 });
    }
    if z.z[1] != 0 {
        out.push(Violation { item: Item::Anchor, label: "2[z_1=0]".into(), lhs: z.z[1] as i64, rhs: 0 });
    }
    for row in constraint_rows(n, t, cw) {
        let lhs = row.lhs(&z.z);
        if lhs > row.rhs {
            out.push(Violation { item: row.item, label: row.label, lhs, rhs: row.rhs });
        }
    }
    if z.size() != m {
        out.push(Violation { item: Item::Size, label: "7[sum=M]".into(), lhs: z.size() as i64, rhs: m as i64 });
    }
    out
}

/// Slack `rhs - lhs` of one row at the reported optimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slack {
    pub label: String,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub n: usize,
    pub m: u64,
    pub t: usize,
    /// Maximum free points, `None` when no distribution is feasible.
    pub value: Option<i64>,
    /// Every distribution attaining `value`, in lexicographic order.
    pub optimal_distributions: Vec<WeightDistribution>,
    /// Slack of every row at the first optimum.
    pub constraint_trace: Vec<Slack>,
    /// False when the budget ran out before the search space was exhausted.
    pub complete: bool,
}

impl BoundResult {
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let value = self.value.map_or("infeasible".to_string(), |v| v.to_string());
        let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", self.n, self.m, self.t, value, self.optimal_distributions.len());
        for d in &self.optimal_distributions {
            let parts: Vec<String> = d.z.iter().map(|z| z.to_string()).collect();
            let _ = writeln!(out, "{}", parts.join("\t"));
        }
        out
    }
}

/// Depth-first enumeration of distributions, heaviest weight first.
struct Enumerator<'a> {
    n: usize,
    rows: &'a [Row],
    /// Rows with only nonnegative coefficients can be pruned on partial sums.
    prunable: Vec<bool>,
    by_var: Vec<Vec<(usize, i64)>>,
    partial: Vec<i64>,
    z: Vec<u64>,
    mode: Mode,
    meter: Meter,
}

enum Mode {
    /// Minimise coverage at fixed size; keep every tie.
    MinCover { best: u64, optima: Vec<Vec<u64>> },
    /// Stop at the first feasible completion.
    Feasible { found: Option<Vec<u64>> },
    /// Collect every feasible distribution with exactly this coverage.
    AtCover { target: u64, found: Vec<Vec<u64>> },
}

impl<'a> Enumerator<'a> {
    fn new(n: usize, rows: &'a [Row], mode: Mode, budget: Budget) -> Enumerator<'a> {
        let mut by_var = vec![Vec::new(); n + 1];
        for (r, row) in rows.iter().enumerate() {
            for &(i, c) in &row.terms {
                by_var[i].push((r, c));
            }
        }
        let mut z = vec![0u64; n + 1];
        z[0] = 1;
        let partial = rows.iter().map(|row| row.lhs(&z)).collect();
        Enumerator {
            n,
            rows,
            prunable: rows.iter().map(Row::nonnegative).collect(),
            by_var,
            partial,
            z,
            mode,
            meter: budget.meter(),
        }
    }

    /// Largest value variable `i` can take given the current partial sums.
    fn cap(&self, i: usize, remaining: u64) -> u64 {
        let mut cap = remaining as i64;
        for &(r, c) in &self.by_var[i] {
            if c > 0 && self.prunable[r] {
                let room = self.rows[r].rhs - self.partial[r];
                if room < 0 {
                    return 0;
                }
                cap = cap.min(room / c);
            }
        }
        cap.max(0) as u64
    }

    fn assign(&mut self, i: usize, v: u64) {
        let delta = v as i64 - self.z[i] as i64;
        self.z[i] = v;
        for &(r, c) in &self.by_var[i] {
            self.partial[r] += c * delta;
        }
    }

    fn violated(&self) -> bool {
        self.partial.iter().zip(self.rows).any(|(p, row)| *p > row.rhs)
    }

    fn run(&mut self, m: u64) {
        if m == 0 || self.violated() && self.rows.iter().all(Row::nonnegative) {
            return;
        }
        self.go(self.n, m - 1, 1);
    }

    /// Assigns `z_k` given `remaining` words still to place among weights `2..=k`.
    fn go(&mut self, k: usize, remaining: u64, cover: u64) {
        if !self.meter.tick() {
            return;
        }
        if k < 2 {
            if remaining == 0 && !self.violated() {
                self.record(cover);
            }
            return;
        }
        // Greedy lower bound on the coverage still to come: cheapest weights first.
        let mut left = remaining;
        let mut extra = 0u64;
        let mut caps = vec![0u64; k + 1];
        for i in 2..=k {
            caps[i] = self.cap(i, remaining);
            let take = caps[i].min(left);
            extra += take * (i as u64 + 1);
            left -= take;
        }
        if left > 0 {
            return;
        }
        match &self.mode {
            Mode::MinCover { best, .. } if cover + extra > *best => return,
            Mode::AtCover { target, .. } if cover + extra > *target => return,
            _ => {}
        }
        let lo = if k == 2 { remaining } else { 0 };
        let hi = caps[k].min(remaining);
        for v in lo..=hi {
            self.assign(k, v);
            self.go(k - 1, remaining - v, cover + v * (k as u64 + 1));
            if matches!(self.mode, Mode::Feasible { found: Some(_) }) {
                break;
            }
        }
        self.assign(k, 0);
    }

    fn record(&mut self, cover: u64) {
        match &mut self.mode {
            Mode::MinCover { best, optima } => {
                if cover < *best {
                    *best = cover;
                    optima.clear();
                }
                optima.push(self.z.clone());
            }
            Mode::Feasible { found } => *found = Some(self.z.clone()),
            Mode::AtCover { target, found } => {
                if cover == *target {
                    found.push(self.z.clone());
                }
            }
        }
    }
}

/// Exact maximum of the free-point objective over all feasible distributions.
pub fn f_upper_bound(n: usize, m: u64, t: usize, cw: &CwTable) -> BoundResult {
    f_upper_bound_within(n, m, t, cw, Budget::unlimited())
}

pub fn f_upper_bound_within(n: usize, m: u64, t: usize, cw: &CwTable, budget: Budget) -> BoundResult {
    let rows = constraint_rows(n, t, cw);
    let mut e = Enumerator::new(n, &rows, Mode::MinCover { best: u64::MAX, optima: Vec::new() }, budget);
    e.run(m);
    let complete = !e.meter.exhausted();
    let Mode::MinCover { best, mut optima } = e.mode else { unreachable!() };
    optima.sort();
    let optimal_distributions: Vec<WeightDistribution> = optima.into_iter().map(WeightDistribution::new).collect();
    let constraint_trace = optimal_distributions
        .first()
        .map(|d| {
            rows.iter()
                .map(|r| Slack { label: r.label.clone(), lhs: r.lhs(&d.z), rhs: r.rhs })
                .collect()
        })
        .unwrap_or_default();
    BoundResult {
        n,
        m,
        t,
        value: (!optimal_distributions.is_empty()).then(|| (1i64 << n) - best as i64),
        optimal_distributions,
        constraint_trace,
        complete,
    }
}

/// Every feasible distribution of size `m` whose coverage `Σ (w+1) z_w` is
/// exactly `cover`, in lexicographic order; the flag is false if the budget ran out.
pub fn distributions_with_cover(
    n: usize,
    m: u64,
    t: usize,
    cw: &CwTable,
    cover: u64,
    budget: Budget,
) -> (Vec<WeightDistribution>, bool) {
    let rows = constraint_rows(n, t, cw);
    let mut e = Enumerator::new(n, &rows, Mode::AtCover { target: cover, found: Vec::new() }, budget);
    e.run(m);
    let complete = !e.meter.exhausted();
    let Mode::AtCover { mut found, .. } = e.mode else { unreachable!() };
    found.sort();
    (found.into_iter().map(WeightDistribution::new).collect(), complete)
}

/// Some distribution of size `m` satisfying every constraint, if one exists.
pub fn feasible_distribution(n: usize, m: u64, t: usize, cw: &CwTable) -> Option<WeightDistribution> {
    let rows = constraint_rows(n, t, cw);
    let mut e = Enumerator::new(n, &rows, Mode::Feasible { found: None }, Budget::unlimited());
    e.run(m);
    let Mode::Feasible { found } = e.mode else { unreachable!() };
    found.map(WeightDistribution::new)
}

/// Largest size for which the constraint system is feasible.
///
/// Feasibility is monotone in `M` (lowering any `z_i`, `i >= 2`, keeps every
/// nonnegative row satisfied), so a doubling-then-bisection search suffices.
pub fn feasible_max_size(n: usize, t: usize, cw: &CwTable) -> u64 {
    let ok = |m: u64| feasible_distribution(n, m, t, cw).is_some();
    if !ok(1) {
        return 0;
    }
    let (mut lo, mut hi) = (1u64, 2u64);
    while ok(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
