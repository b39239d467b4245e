use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::exact::{exact_search, SearchStatus, EXACT_MAX_LEN};
use super::nested::nested_family;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::zcore::{free_count_raw, read_code, write_code, Code};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradeoffRow {
    pub m: u64,
    /// Free points of `witness`.
    pub free: u64,
    pub witness: Code,
    /// False when `free` is only the best value found.
    pub optimal: bool,
}

/// Best free-point count for every size `0..=M_max` at one length, `t = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradeoffTable {
    pub n: usize,
    pub rows: Vec<TradeoffRow>,
}

/// Node budget per size for the exact attempts made at lengths above
/// [`EXACT_MAX_LEN`]; small sizes settle well within it.
const LONG_EXACT_NODES: u64 = 20_000;

impl TradeoffTable {
    pub fn t(&self) -> usize {
        1
    }

    /// Largest size with a row.
    pub fn max_size(&self) -> u64 {
        self.rows.len() as u64 - 1
    }

    pub fn row(&self, m: u64) -> Option<&TradeoffRow> {
        self.rows.get(m as usize)
    }

    pub fn free(&self, m: u64) -> Option<u64> {
        self.row(m).map(|r| r.free)
    }

    pub fn all_optimal(&self) -> bool {
        self.rows.iter().all(|r| r.optimal)
    }

    /// Name of the cache file for length `n`.
    pub fn file_name(n: usize) -> String {
        format!("tradeoff_n{}.tsv", n)
    }

    fn witness_name(n: usize, m: u64) -> String {
        format!("tradeoff_n{}_M{}.zcode", n, m)
    }

    /// Writes `tradeoff_n<k>.tsv` and one witness file per row into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<PathBuf> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let mut out = String::new();
        for r in &self.rows {
            let name = Self::witness_name(self.n, r.m);
            write_code(&r.witness, dir.join(&name))?;
            let status = if r.optimal { "optimal" } else { "lower" };
            let _ = writeln!(out, "{}\t{}\t{}\t{}", r.m, r.free, name, status);
        }
        let path = dir.join(Self::file_name(self.n));
        fs::write(&path, out)?;
        Ok(path)
    }

    /// Reads a table written by [`save`](Self::save), re-validating every witness.
    pub fn load(dir: impl AsRef<Path>, n: usize) -> Result<TradeoffTable> {
        let dir = dir.as_ref();
        let text = fs::read_to_string(dir.join(Self::file_name(n)))?;
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: i + 1, msg };
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 && f.len() != 4 {
                return Err(bad("expected M F witness-file [status]".into()));
            }
            let m: u64 = f[0].parse().map_err(|_| bad(format!("bad size {:?}", f[0])))?;
            let free: u64 = f[1].parse().map_err(|_| bad(format!("bad free-point count {:?}", f[1])))?;
            let witness = read_code(dir.join(f[2]))?;
            let optimal = match f.get(3).copied() {
                None | Some("optimal") => true,
                Some("lower") => false,
                Some(s) => return Err(bad(format!("bad status {:?}", s))),
            };
            if m != rows.len() as u64 || witness.n() != n || witness.len() as u64 != m {
                return Err(bad(format!("row for M={} does not fit the table", m)));
            }
            if !crate::zcore::validate_code(&witness).valid || free_count_raw(n, &witness.bits()) != free {
                return Err(bad(format!("witness for M={} does not give F={}", m, free)));
            }
            rows.push(TradeoffRow { m, free, witness, optimal });
        }
        if rows.is_empty() {
            return Err(Error::MissingTable(n));
        }
        Ok(TradeoffTable { n, rows })
    }

    /// Loads the cached table for `n` from `dir`, building and saving it if absent or unreadable.
    pub fn cached(dir: impl AsRef<Path>, n: usize, budget: Budget, seed: u64) -> Result<TradeoffTable> {
        let dir = dir.as_ref();
        match TradeoffTable::load(dir, n) {
            Ok(t) => Ok(t),
            Err(_) => {
                let t = tradeoff_table(n, budget, seed);
                t.save(dir)?;
                Ok(t)
            }
        }
    }
}

/// The (size, free points) frontier for length `n`.
///
/// Exact for `n <= 8`. Longer lengths combine a nested family (covering
/// every size up to the largest found) with short exact attempts per size,
/// then enforce `F(M) >= F(M+1) + 1` by deleting a heaviest word from the
/// next row whenever that beats the current one.
pub fn tradeoff_table(n: usize, budget: Budget, seed: u64) -> TradeoffTable {
    let mut rows = vec![TradeoffRow {
        m: 0,
        free: 1 << n,
        witness: Code::from_sorted_raw(n, 1, &[]),
        optimal: true,
    }];
    let exact_row = |m: u64, b: Budget| {
        let r = exact_search(n, m, b);
        match (r.status, r.code, r.free) {
            (SearchStatus::Optimal, Some(c), Some(f)) => Some(Some(TradeoffRow { m, free: f, witness: c, optimal: true })),
            (SearchStatus::Infeasible, _, _) => Some(None),
            _ => None,
        }
    };
    if n <= EXACT_MAX_LEN {
        for m in 1.. {
            match exact_row(m, budget) {
                Some(Some(row)) => rows.push(row),
                Some(None) => return TradeoffTable { n, rows },
                None => break,
            }
        }
    }
    let family = nested_family(n, budget, seed);
    for (i, code) in family.chain.iter().enumerate() {
        let m = i as u64 + 1;
        let free = free_count_raw(n, &code.bits());
        let nested = TradeoffRow { m, free, witness: code.clone(), optimal: false };
        if let Some(r) = rows.get_mut(m as usize) {
            if r.free < free {
                *r = nested;
            }
            continue;
        }
        let row = match exact_row(m, Budget { max_nodes: Some(LONG_EXACT_NODES), deadline: budget.deadline }) {
            Some(Some(r)) if r.free >= free => r,
            _ => nested,
        };
        rows.push(row);
    }
    for m in (1..rows.len().saturating_sub(1)).rev() {
        let next = rows[m + 1].witness.bits();
        let i = (0..next.len()).max_by_key(|&i| (next[i].count_ones(), next[i])).unwrap();
        let mut smaller = next.clone();
        smaller.remove(i);
        let free = free_count_raw(n, &smaller);
        if free > rows[m].free {
            rows[m] = TradeoffRow { m: m as u64, free, witness: Code::from_sorted_raw(n, 1, &smaller), optimal: false };
        }
    }
    TradeoffTable { n, rows }
}
