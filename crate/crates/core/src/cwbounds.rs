//! Sizes of binary constant-weight codes `A(n, d, w)`: weight-`w` words of
//! length `n` with pairwise Hamming distance at least `d`.
//!
//! Upper bounds come from the Johnson recursion; exact values and lower
//! bounds come from a maximum-clique search with an explicit witness.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::budget::Budget;
use crate::clique::{max_clique, BitSet};
use crate::combin::binom;
use crate::error::{Error, Result};
use crate::zcore::{mask, Code};

/// Largest vertex count the clique search will attempt.
const MAX_VERTICES: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CwQuery {
    pub n: usize,
    pub d: usize,
    pub w: usize,
}

impl CwQuery {
    pub fn new(n: usize, d: usize, w: usize) -> Result<CwQuery> {
        if w > n {
            return Err(Error::BadWeight { n, w });
        }
        if d < 2 {
            return Err(Error::Invalid(format!("distance {} below 2", d)));
        }
        Ok(CwQuery { n, d, w })
    }

    /// At most one word fits: any two distinct weight-`w` words are closer than `d`.
    fn trivial(&self) -> bool {
        self.w == 0 || self.w == self.n || 2 * self.w < self.d || 2 * (self.n - self.w) < self.d
    }
}

/// Johnson-recursion upper bound on `A(n, d, w)`.
pub fn cw_upper(q: CwQuery) -> Result<u64> {
    if q.w > q.n {
        return Err(Error::BadWeight { n: q.n, w: q.w });
    }
    Ok(johnson(q.n, q.d, q.w, &mut HashMap::new()))
}

fn johnson(n: usize, d: usize, w: usize, memo: &mut HashMap<(usize, usize), u64>) -> u64 {
    let q = CwQuery { n, d, w };
    if q.trivial() {
        return 1;
    }
    if let Some(&v) = memo.get(&(n, w)) {
        return v;
    }
    let n64 = n as u64;
    let via_lower = n64 * johnson(n - 1, d, w - 1, memo) / w as u64;
    let via_upper = n64 * johnson(n - 1, d, w, memo) / (n - w) as u64;
    let v = via_lower.min(via_upper);
    memo.insert((n, w), v);
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwResult {
    pub lower: u64,
    /// A constant-weight code of size `lower`; `None` only for `n = 0`.
    pub witness: Option<Code>,
    pub upper: u64,
    pub exact: bool,
}

fn weight_words(n: usize, w: usize) -> Vec<u32> {
    (0..=mask(n)).filter(|x| x.count_ones() as usize == w).collect()
}

/// Exhaustive maximum-clique search for `A(n, d, w)` within `budget`.
pub fn cw_exact(q: CwQuery, budget: Budget) -> CwResult {
    let upper = johnson(q.n, q.d, q.w, &mut HashMap::new());
    if q.n == 0 {
        return CwResult { lower: 1, witness: None, upper: 1, exact: true };
    }
    let words = weight_words(q.n, q.w);
    let make = |idx: &[usize]| {
        let mut bits: Vec<u32> = idx.iter().map(|&i| words[i]).collect();
        bits.sort();
        Code::from_sorted_raw(q.n, 1, &bits)
    };
    let far = |a: u32, b: u32| (a ^ b).count_ones() as usize >= q.d;

    // Lexicode seed.
    let mut greedy: Vec<usize> = Vec::new();
    for (i, &x) in words.iter().enumerate() {
        if greedy.iter().all(|&j| far(words[j], x)) {
            greedy.push(i);
        }
    }
    if greedy.len() as u64 >= upper || q.trivial() {
        let lower = greedy.len() as u64;
        return CwResult { lower, witness: Some(make(&greedy)), upper: lower.max(upper), exact: lower == upper };
    }
    if binom(q.n as i64, q.w as i64) > MAX_VERTICES {
        return CwResult { lower: greedy.len() as u64, witness: Some(make(&greedy)), upper, exact: false };
    }

    let m = words.len();
    let mut adj = vec![BitSet::new(m); m];
    for i in 0..m {
        for j in i + 1..m {
            if far(words[i], words[j]) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    // All weight-w words are equivalent under coordinate permutations, so
    // some maximum code contains the smallest one (index 0).
    let mut meter = budget.meter();
    let r = max_clique(&adj, &[0], greedy, upper as usize, &mut meter);
    let lower = r.clique.len() as u64;
    let exact = r.complete || lower == upper;
    CwResult {
        lower,
        witness: Some(make(&r.clique)),
        upper: if exact { lower } else { upper },
        exact,
    }
}

/// One row of the constant-weight cache.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CwEntry {
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
}

/// Precomputed `A(n, d, w)` bounds for small lengths, with Johnson fallback
/// for anything not tabulated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CwTable {
    entries: BTreeMap<(usize, usize, usize), CwEntry>,
}

impl CwTable {
    /// A table with no searched entries: lower bounds 1, Johnson upper bounds.
    pub fn johnson_only() -> CwTable {
        CwTable::default()
    }

    /// Runs [`cw_exact`] for every `n <= max_n`, `0 <= w <= n` at distance `d`.
    pub fn build(max_n: usize, d: usize, per_query: Budget) -> CwTable {
        let mut entries = BTreeMap::new();
        for n in 0..=max_n {
            for w in 0..=n {
                let r = cw_exact(CwQuery { n, d, w }, per_query);
                entries.insert((n, d, w), CwEntry { lower: r.lower, upper: r.upper, exact: r.exact });
            }
        }
        CwTable { entries }
    }

    pub fn get(&self, n: usize, d: usize, w: usize) -> Option<CwEntry> {
        self.entries.get(&(n, d, w)).copied()
    }

    /// A valid upper bound on `A(n, d, w)`; 0 when `w` is out of range.
    pub fn upper(&self, n: usize, d: usize, w: usize) -> u64 {
        if w > n {
            return 0;
        }
        let j = johnson(n, d, w, &mut HashMap::new());
        self.get(n, d, w).map_or(j, |e| e.upper.min(j))
    }

    /// A valid lower bound on `A(n, d, w)` backed by a witness; 1 when untabulated.
    pub fn lower(&self, n: usize, d: usize, w: usize) -> u64 {
        if w > n {
            return 0;
        }
        self.get(n, d, w).map_or(1, |e| e.lower)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (&(n, d, w), e) in &self.entries {
            let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", n, d, w, e.lower, e.upper, e.exact as u8);
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<CwTable> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<u64> = line
                .split('\t')
                .map(|s| s.trim().parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
            if f.len() != 6 || f[3] > f[4] || f[5] > 1 {
                return Err(Error::Parse { line: i + 1, msg: "expected n d w lower upper exact".into() });
            }
            entries.insert(
                (f[0] as usize, f[1] as usize, f[2] as usize),
                CwEntry { lower: f[3], upper: f[4], exact: f[5] == 1 },
            );
        }
        Ok(CwTable { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<CwTable> {
        CwTable::from_tsv(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_tsv())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize, d: usize, w: usize) -> CwQuery {
        CwQuery::new(n, d, w).unwrap()
    }

    #[test]
    fn upper_examples() {
        assert_eq!(cw_upper(q(4, 4, 2)).unwrap(), 2);
        assert_eq!(cw_upper(q(5, 4, 2)).unwrap(), 2);
        for n in 0..10 {
            assert_eq!(cw_upper(q(n, 4, 0)).unwrap(), 1);
        }
        assert!(CwQuery::new(3, 4, 4).is_err());
        assert!(cw_upper(CwQuery { n: 3, d: 4, w: 5 }).is_err());
    }

    #[test]
    fn classical_johnson_values() {
        assert_eq!(cw_upper(q(7, 4, 3)).unwrap(), 7);
        assert_eq!(cw_upper(q(8, 4, 4)).unwrap(), 14);
        assert_eq!(cw_upper(q(9, 4, 4)).unwrap(), 18);
        assert_eq!(cw_upper(q(10, 4, 5)).unwrap(), 36);
    }

    #[test]
    fn symmetric_in_weight() {
        for n in 0..16 {
            for w in 0..=n {
                assert_eq!(cw_upper(q(n, 4, w)).unwrap(), cw_upper(q(n, 4, n - w)).unwrap());
            }
        }
    }

    #[test]
    fn exact_examples() {
        let r = cw_exact(q(4, 4, 2), Budget::unlimited());
        assert!(r.exact);
        assert_eq!(r.lower, 2);
        assert_eq!(r.witness.unwrap().bits(), vec![0b0011, 0b1100]);
        for n in 1..8 {
            let r = cw_exact(q(n, 4, 1), Budget::unlimited());
            assert!(r.exact && r.lower == 1);
        }
        let r = cw_exact(q(0, 4, 0), Budget::unlimited());
        assert!(r.exact && r.lower == 1);
    }

    #[test]
    fn table_tsv_roundtrip() {
        let t = CwTable::build(6, 4, Budget::nodes(10_000));
        let back = CwTable::from_tsv(&t.to_tsv()).unwrap();
        assert_eq!(back, t);
        assert_eq!(t.upper(6, 4, 3), 4);
        assert_eq!(t.lower(6, 4, 3), 4);
        assert_eq!(t.upper(20, 4, 2), 10);
        assert_eq!(t.lower(20, 4, 2), 1);
        assert!(CwTable::from_tsv("1\t4\t0\t2\t1\t1\n").is_err());
    }
}
