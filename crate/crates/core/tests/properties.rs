use proptest::prelude::*;

use zchan::cwbounds::{cw_exact, cw_upper, CwQuery, CwTable};
use zchan::lpbound::{check_constraints, f_upper_bound};
use zchan::zcore::{downward_shadow, free_points, validate_code, vt_code, weight_distribution, z_metrics};
use zchan::{Budget, Code, Word};

fn word(n: usize, bits: u32) -> Word {
    Word::new(n, bits).unwrap()
}

/// Checks one pair against the definitions directly.
fn check_pair(n: usize, a: u32, b: u32) {
    let (x, y) = (word(n, a), word(n, b));
    let m = z_metrics(&x, &y).unwrap();
    let nab = (0..n).filter(|&i| a >> i & 1 == 0 && b >> i & 1 == 1).count() as u32;
    let nba = (0..n).filter(|&i| a >> i & 1 == 1 && b >> i & 1 == 0).count() as u32;
    assert_eq!((m.n_ab, m.n_ba), (nab, nba));
    assert_eq!(m.d_h, nab + nba);
    assert_eq!(m.d_h, (a ^ b).count_ones());
    assert_eq!(m.d_z, nab.max(nba));
    assert_eq!(z_metrics(&y, &x).unwrap().d_z, m.d_z);
    assert!(2 * m.d_z >= m.d_h && m.d_z <= m.d_h);
    assert_eq!(m.d_z == 0, a == b);
}

#[test]
fn metric_all_pairs_small() {
    for n in 1..=4 {
        let size = 1u32 << n;
        for a in 0..size {
            for b in 0..size {
                check_pair(n, a, b);
                for c in 0..size {
                    let d = |p: u32, q: u32| z_metrics(&word(n, p), &word(n, q)).unwrap().d_z;
                    assert!(d(a, c) <= d(a, b) + d(b, c));
                }
            }
            assert_eq!(downward_shadow(&word(n, a), 1).len(), a.count_ones() as usize + 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100_000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn metric_random_pairs(n in 1usize..=12, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let m = (1u32 << n) - 1;
        let (a, b, c) = (a & m, b & m, c & m);
        check_pair(n, a, b);
        let d = |p: u32, q: u32| z_metrics(&word(n, p), &word(n, q)).unwrap().d_z;
        prop_assert!(d(a, c) <= d(a, b) + d(b, c));
        let sh = downward_shadow(&word(n, a), 1);
        prop_assert_eq!(sh.len(), a.count_ones() as usize + 1);
        prop_assert!(sh.iter().all(|s| s.is_below(&word(n, a))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2_000, failure_persistence: None, ..ProptestConfig::default() })]

    /// Single-error shadows are disjoint exactly when the code is valid.
    #[test]
    fn shadows_disjoint_iff_valid(n in 2usize..=8, raw in prop::collection::btree_set(any::<u32>(), 1..12)) {
        let m = (1u32 << n) - 1;
        let bits: std::collections::BTreeSet<u32> = raw.into_iter().map(|x| x & m).collect();
        let bits: Vec<u32> = bits.into_iter().collect();
        let code = Code::from_bits(n, 1, &bits).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut disjoint = true;
        for c in code.words() {
            for p in downward_shadow(c, 1) {
                disjoint &= seen.insert(p.bits());
            }
        }
        let valid = validate_code(&code).valid;
        prop_assert_eq!(disjoint, valid);
        if valid {
            let f = free_points(&code).unwrap();
            prop_assert_eq!(f.count as usize, (1usize << n) - seen.len());
            prop_assert_eq!(f.count as i64, weight_distribution(&code).free_points());
            // Sound bound: no valid code beats it, and its distribution passes every row.
            let cw = CwTable::johnson_only();
            if code.contains(&word(n, 0)) && code.words().iter().all(|w| w.weight() != 1) {
                prop_assert!(check_constraints(&weight_distribution(&code), n, code.len() as u64, 1, &cw).is_empty());
            }
            let b = f_upper_bound(n, code.len() as u64, 1, &cw).value.unwrap();
            prop_assert!(f.count as i64 <= b);
        }
    }
}

#[test]
fn vt_codes_are_valid() {
    for n in 1..=12 {
        let mut total = 0;
        for a in 0..=n {
            let c = vt_code(n, a).unwrap();
            assert!(validate_code(&c).valid, "VT_{}({})", a, n);
            total += c.len();
        }
        assert_eq!(total, 1 << n);
    }
}

#[test]
fn bound_is_monotone() {
    let cw = CwTable::johnson_only();
    for n in 2..=8 {
        let mut prev = 1i64 << n;
        for m in 1.. {
            match f_upper_bound(n, m, 1, &cw).value {
                Some(v) => {
                    assert!(v < prev, "n={} M={}", n, m);
                    prev = v;
                }
                None => {
                    assert!(f_upper_bound(n, m + 1, 1, &cw).value.is_none());
                    break;
                }
            }
        }
    }
}

#[test]
fn constant_weight_invariants() {
    for n in 0..=9 {
        for w in 0..=n {
            let q = CwQuery::new(n, 4, w).unwrap();
            let r = cw_exact(q, Budget::nodes(20_000));
            let up = cw_upper(q).unwrap();
            assert!(r.lower <= r.upper && r.upper <= up);
            assert_eq!(up, cw_upper(CwQuery::new(n, 4, n - w).unwrap()).unwrap());
            if let Some(c) = r.witness {
                assert_eq!(c.len() as u64, r.lower);
                let bits = c.bits();
                assert!(bits.iter().all(|x| x.count_ones() as usize == w));
                for (i, a) in bits.iter().enumerate() {
                    assert!(bits[i + 1..].iter().all(|b| (a ^ b).count_ones() >= 4));
                }
            }
        }
    }
    assert_eq!(cw_exact(CwQuery::new(8, 4, 4).unwrap(), Budget::unlimited()).lower, 14);
}
