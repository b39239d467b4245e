use std::collections::BTreeSet;

use zchan::fsearch::{
    exact_search, heuristic_search, nested_family, tradeoff_table, SearchStatus, TradeoffTable,
};
use zchan::lpbound::f_upper_bound;
use zchan::cwbounds::CwTable;
use zchan::zcore::{free_points, validate_code, weight_distribution};
use zchan::Budget;

/// Best free-point count per size, by enumerating every subset of `{0,1}^n`.
/// Free points are counted as the complement of the union of balls.
fn naive_frontier(n: usize) -> Vec<u64> {
    let size = 1u32 << n;
    let dz = |a: u32, b: u32| (!a & b).count_ones().max((a & !b).count_ones());
    let mut best: Vec<u64> = vec![0; size as usize + 1];
    let mut seen = vec![false; size as usize + 1];
    for set in 0u64..(1u64 << size) {
        let words: Vec<u32> = (0..size).filter(|&x| set >> x & 1 == 1).collect();
        let ok = words.iter().enumerate().all(|(i, &a)| words[i + 1..].iter().all(|&b| dz(a, b) >= 2));
        if !ok {
            continue;
        }
        let mut covered = BTreeSet::new();
        for &c in &words {
            covered.insert(c);
            for i in 0..n {
                if c >> i & 1 == 1 {
                    covered.insert(c & !(1 << i));
                }
            }
        }
        let free = size as u64 - covered.len() as u64;
        let m = words.len();
        if !seen[m] || free > best[m] {
            best[m] = free;
            seen[m] = true;
        }
    }
    let top = seen.iter().rposition(|&s| s).unwrap();
    best.truncate(top + 1);
    best
}

fn strs(c: &zchan::Code) -> Vec<String> {
    c.words().iter().map(|w| w.to_string()).collect()
}

#[test]
fn exact_search_matches_naive_oracle() {
    for n in 1..=4 {
        let oracle = naive_frontier(n);
        for (m, &f) in oracle.iter().enumerate() {
            let r = exact_search(n, m as u64, Budget::unlimited());
            assert_eq!(r.status, SearchStatus::Optimal, "n={} M={}", n, m);
            assert_eq!(r.free, Some(f), "n={} M={}", n, m);
        }
        let past = exact_search(n, oracle.len() as u64, Budget::unlimited());
        assert_eq!(past.status, SearchStatus::Infeasible, "n={} M={}", n, oracle.len());
    }
}

#[test]
fn table_two_exact_values() {
    for (n, m, f) in [(6, 12, 16), (6, 8, 38), (7, 18, 48), (7, 16, 62), (8, 36, 76), (8, 32, 106)] {
        let r = exact_search(n, m, Budget::unlimited());
        assert_eq!(r.status, SearchStatus::Optimal);
        assert_eq!(r.free, Some(f), "({},{})", n, m);
        let code = r.code.unwrap();
        assert_eq!(code.len() as u64, m);
        assert!(validate_code(&code).valid);
        assert_eq!(free_points(&code).unwrap().count, f);
    }
}

#[test]
fn seven_seventeen_is_fifty_five() {
    let r = exact_search(7, 17, Budget::unlimited());
    assert_eq!(r.status, SearchStatus::Optimal);
    assert_eq!(r.free, Some(55));
    assert_eq!(r.upper, Some(56));
}

#[test]
fn small_example_pair() {
    let r = exact_search(4, 2, Budget::unlimited());
    assert_eq!(r.free, Some(12));
    assert_eq!(strs(&r.code.unwrap()), vec!["0000", "0011"]);
    let r = exact_search(4, 4, Budget::unlimited());
    assert_eq!(strs(&r.code.unwrap()), vec!["0000", "0011", "1100", "1111"]);
}

#[test]
fn budget_exhaustion_is_reported() {
    let r = exact_search(9, 62, Budget::nodes(1000));
    assert_eq!(r.status, SearchStatus::Incomplete);
    assert!(r.code.is_none());
    assert_eq!(r.upper, Some(181));
}

#[test]
fn tradeoff_small_examples() {
    let t = tradeoff_table(4, Budget::unlimited(), 0);
    let f: Vec<u64> = t.rows.iter().map(|r| r.free).collect();
    assert_eq!(f, vec![16, 15, 12, 9, 4]);
    let t = tradeoff_table(2, Budget::unlimited(), 0);
    let f: Vec<u64> = t.rows.iter().map(|r| r.free).collect();
    assert_eq!(f, vec![4, 3, 0]);
    assert!(t.rows[0].witness.is_empty());
}

#[test]
fn tradeoff_invariants() {
    let cw = CwTable::johnson_only();
    for n in 1..=8 {
        let t = tradeoff_table(n, Budget::unlimited(), 0);
        assert!(t.all_optimal());
        assert_eq!(t.rows[0].free, 1 << n);
        for r in &t.rows {
            assert!(validate_code(&r.witness).valid);
            assert_eq!(r.witness.len() as u64, r.m);
            assert_eq!(free_points(&r.witness).unwrap().count, r.free);
            if r.m > 0 {
                let b = f_upper_bound(n, r.m, 1, &cw).value.unwrap();
                assert!(r.free as i64 <= b);
            }
        }
        for m in 1..t.max_size() {
            assert!(t.free(m + 1).unwrap() < t.free(m).unwrap());
        }
    }
    let t6 = tradeoff_table(6, Budget::unlimited(), 0);
    let tail: Vec<u64> = (8..=12).map(|m| t6.free(m).unwrap()).collect();
    assert_eq!(tail, vec![38, 33, 28, 23, 16]);
}

#[test]
fn tradeoff_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let t = tradeoff_table(5, Budget::unlimited(), 0);
    let path = t.save(dir.path()).unwrap();
    assert!(path.ends_with("tradeoff_n5.tsv"));
    assert_eq!(TradeoffTable::load(dir.path(), 5).unwrap(), t);
    let cached = TradeoffTable::cached(dir.path(), 5, Budget::nodes(1), 0).unwrap();
    assert_eq!(cached, t);
    assert!(TradeoffTable::load(dir.path(), 6).is_err());

    // A tampered free-point count is rejected.
    let file = dir.path().join("tradeoff_n5.tsv");
    let text = std::fs::read_to_string(&file).unwrap().replace("2\t28\t", "2\t29\t");
    std::fs::write(&file, text).unwrap();
    assert!(TradeoffTable::load(dir.path(), 5).is_err());
}

#[test]
fn nested_families() {
    let f = nested_family(6, Budget::unlimited(), 0);
    assert_eq!(f.max_size(), 12);
    assert!(f.top_optimal);
    let fc = f.free_counts();
    assert_eq!(&fc[7..], &[38, 33, 28, 23, 16]);
    assert_eq!(fc[0], 63);
    for k in 1..f.max_size() {
        let small = f.prefix(k).unwrap().bits();
        let big = f.prefix(k + 1).unwrap().bits();
        assert!(small.iter().all(|x| big.contains(x)));
        assert!(validate_code(f.prefix(k).unwrap()).valid);
    }

    let t8 = tradeoff_table(8, Budget::unlimited(), 0);
    let f8 = nested_family(8, Budget::unlimited(), 0);
    for (k, free) in f8.free_counts().into_iter().enumerate() {
        assert_eq!(Some(free), t8.free(k as u64 + 1), "n=8 M={}", k + 1);
    }
}

#[test]
fn nested_nine_reaches_table_values() {
    let f = nested_family(9, Budget::nodes(200_000), 1);
    assert_eq!(f.max_size(), 62);
    let fc = f.free_counts();
    let tail: Vec<u64> = (58..=62).rev().map(|m| fc[m - 1]).collect();
    assert_eq!(tail, vec![177, 186, 193, 200, 207]);
    assert_eq!(weight_distribution(f.prefix(62).unwrap()).to_string(), "1+0+4+9+17+18+12+0+1+0");
}

#[test]
fn heuristic_reaches_targets() {
    let r = heuristic_search(6, 12, Budget::nodes(10_000), 3);
    assert!(r.reached);
    let r = heuristic_search(10, 108, Budget::nodes(50_000), 3);
    assert!(r.code.len() >= 108 && validate_code(&r.code).valid);
    let r = heuristic_search(10, 110, Budget::nodes(200_000), 1);
    assert!(r.reached && validate_code(&r.code).valid);
    assert_eq!(r, heuristic_search(10, 110, Budget::nodes(200_000), 1));
}
