use std::collections::{BTreeMap, BTreeSet};

use zchan::fsearch::{tradeoff_table, TradeoffTable};
use zchan::twostage::{
    build_symmetric, dp_optimize, general_optimize, SymmetricProfile, TwoStageScheme,
};
use zchan::{Budget, Code, Error, Word};

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn table(n: usize) -> TradeoffTable {
    tradeoff_table(n, Budget::unlimited(), 0)
}

fn example_one() -> TwoStageScheme {
    let t4 = table(4);
    let p = SymmetricProfile::from_table(&t4, 5, vec![2, 2, 3, 3, 4, 4]).unwrap();
    build_symmetric(&p, &t4).unwrap()
}

/// Vertex list of the 53-message example: `111111` carries `{00, 11}`, the
/// listed vertices carry nothing and every other vertex carries `{00}`.
fn example_two() -> TwoStageScheme {
    let empty: BTreeSet<&str> = [
        "111000", "001110", "010101", "100011", "100100", "010010", "001001", "110000", "010100", "001000",
        "000010", "000001",
    ]
    .into_iter()
    .collect();
    let codes = (0..64u32)
        .map(|v| {
            let name = format!("{:06b}", v);
            if name == "111111" {
                Code::from_strs(1, "00 11").unwrap()
            } else if empty.contains(name.as_str()) {
                Code::empty(2, 1).unwrap()
            } else {
                Code::from_strs(1, "00").unwrap()
            }
        })
        .collect();
    TwoStageScheme::new(6, 2, codes).unwrap().build_labeling().unwrap()
}

#[test]
fn example_one_profile() {
    let t4 = table(4);
    let p = SymmetricProfile::from_table(&t4, 5, vec![2, 2, 3, 3, 4, 4]).unwrap();
    assert_eq!(p.f, vec![12, 12, 9, 9, 4, 4]);
    assert!(p.check().is_ok());
    let lines: Vec<(u64, u64)> = (0..5).map(|w| ((5 - w as u64) * p.m[w + 1], p.f[w])).collect();
    assert_eq!(lines, vec![(10, 12), (12, 12), (9, 9), (8, 9), (4, 4)]);
    assert_eq!(p.total(), 96);

    let s = example_one();
    assert_eq!(s.count_messages(), 96);
    let strs = |c: &Code| c.words().iter().map(|x| x.to_string()).collect::<Vec<_>>();
    assert_eq!(strs(s.code(&w("00000"))), vec!["0000", "0011"]);
    assert_eq!(strs(s.code(&w("00110"))), vec!["0000", "0011", "1100"]);
    assert_eq!(strs(s.code(&w("11111"))), vec!["0000", "0011", "1100", "1111"]);
    assert_eq!(s.free(0), 12);
    assert_eq!(s.free(0b00110), 9);
    assert_eq!(s.free(0b11111), 4);
}

#[test]
fn profile_errors() {
    let t4 = table(4);
    let p = SymmetricProfile::from_table(&t4, 5, vec![2, 3, 3, 3, 4, 4]).unwrap();
    match build_symmetric(&p, &t4) {
        Err(Error::ChainViolated { w, lhs, rhs }) => assert_eq!((w, lhs, rhs), (0, 15, 12)),
        other => panic!("unexpected {:?}", other.map(|s| s.count_messages())),
    }
    assert!(matches!(
        SymmetricProfile::from_table(&t4, 5, vec![5, 0, 0, 0, 0, 0]),
        Err(Error::MissingRow { n: 4, m: 5 })
    ));
    let zero = SymmetricProfile::from_table(&t4, 5, vec![0; 6]).unwrap();
    let s = build_symmetric(&zero, &t4).unwrap();
    assert_eq!(s.count_messages(), 0);
    assert!(s.verify_exhaustive().passed());
}

#[test]
fn labeling_examples() {
    let s = example_one();
    let lab = s.labeling(&w("11011")).unwrap();
    let got: Vec<(String, String)> = lab.iter().map(|(p, u)| (p.to_string(), u.to_string())).collect();
    let expect: Vec<(String, String)> = ["0101", "0110", "1001", "1010"]
        .iter()
        .map(|p| (p.to_string(), "11111".to_string()))
        .collect();
    assert_eq!(got, expect);
    assert!(s.labeling(&w("11111")).unwrap().is_empty());
}

#[test]
fn overloaded_vertex_is_rejected() {
    // Vertex 00 hears from 01 (three words) and 10 (two words) but has only four free points.
    let codes = vec![
        Code::from_strs(1, "0000 0011 1100 1111").unwrap(),
        Code::from_strs(1, "0000 0011 1100").unwrap(),
        Code::from_strs(1, "0000 0011").unwrap(),
        Code::empty(4, 1).unwrap(),
    ];
    match TwoStageScheme::new(2, 4, codes).unwrap().build_labeling() {
        Err(Error::LoadExceeded { vertex, load, free }) => assert_eq!((vertex.as_str(), load, free), ("00", 5, 4)),
        other => panic!("unexpected {:?}", other.is_ok()),
    }
}

#[test]
fn encode_decode_examples() {
    let s = example_one();
    let m = s.message_index(0b11111, 2);
    assert_eq!(s.encode(m, &w("11111")).unwrap(), (w("11111"), w("1100")));
    assert_eq!(s.encode(m, &w("11011")).unwrap(), (w("11111"), w("1001")));
    assert!(matches!(s.encode(m, &w("00111")), Err(Error::Unreachable { .. })));
    assert!(matches!(s.encode(0, &w("11111")), Err(Error::BadMessage(0))));
    assert!(matches!(s.encode(97, &w("11111")), Err(Error::BadMessage(97))));

    assert_eq!(s.decode(&w("110110101")).unwrap(), s.message_index(0b11111, 0));
    assert_eq!(s.decode(&w("110110011")).unwrap(), s.message_index(0b11011, 1));
    // Vertex 11111 has no in-neighbours, so its free points decode to nothing.
    assert!(matches!(s.decode(&w("111110101")), Err(Error::UnreachableWord(_))));
}

#[test]
fn roundtrip_and_distinct_outputs() {
    for s in [example_one(), example_two()] {
        let mut seen = BTreeSet::new();
        for m in 1..=s.count_messages() {
            let (u, _) = s.message_pair(m).unwrap();
            let u = zchan::Word::new(s.n1(), u).unwrap();
            let (a, b) = s.encode(m, &u).unwrap();
            let y = Word::new(s.n1() + s.n2(), a.bits() << s.n2() | b.bits()).unwrap();
            let d = s.decode(&y).unwrap();
            assert_eq!(d, m);
            seen.insert(d);
        }
        assert_eq!(seen.len() as u64, s.count_messages());
    }
}

#[test]
fn exhaustive_verification() {
    let s = example_one();
    let r = s.verify_exhaustive();
    assert!(r.passed(), "{:?}", r.first_failure);
    // Per message: no error, one first-stage flip per 1 of u, one second-stage flip per 1 of the codeword.
    let mut expect = 0;
    for m in 1..=96 {
        let (u, i) = s.message_pair(m).unwrap();
        expect += 1 + u.count_ones() as u64 + s.codes()[u as usize].words()[i].weight() as u64;
    }
    assert_eq!(r.cases, expect);

    let s2 = example_two();
    assert_eq!(s2.count_messages(), 53);
    assert!(s2.verify_exhaustive().passed());
    let v = 0b101000;
    assert_eq!(s2.in_load(v), 3);
    assert_eq!(s2.free(v), 3);
}

#[test]
fn fault_injection_is_caught() {
    let mut s = example_one();
    assert!(s.corrupt_label(&w("11011")));
    let r = s.verify_exhaustive();
    assert!(!r.passed());
    let f = r.first_failure.unwrap();
    assert!(f.first_error.is_some());

    let mut s = example_two();
    assert!(s.corrupt_label(&w("101000")));
    assert!(!s.verify_exhaustive().passed());
}

#[test]
fn json_roundtrip() {
    let s = example_one();
    let text = s.to_json();
    assert_eq!(TwoStageScheme::from_json(&text).unwrap(), s);
    let file = s.to_file();
    assert_eq!(file.vertices["11111"], vec!["0000", "0011", "1100", "1111"]);
    assert_eq!(file.labeling.as_ref().unwrap()["11011"]["1001"], "11111");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    s.save(&path).unwrap();
    assert_eq!(TwoStageScheme::load(&path).unwrap(), s);

    // A label pointing at a covered point, or a short quota, is rejected.
    let bad = text.replacen("\"0101\": \"11111\"", "\"0001\": \"11111\"", 1);
    assert!(TwoStageScheme::from_json(&bad).is_err());
    let mut f = s.to_file();
    f.labeling.as_mut().unwrap().get_mut("11011").unwrap().remove("1010");
    assert!(TwoStageScheme::from_file(&f).is_err());
}

fn tables(max: usize) -> BTreeMap<usize, TradeoffTable> {
    (1..=max).map(|n| (n, table(n))).collect()
}

#[test]
fn dp_small_lengths() {
    let t = tables(8);
    let r = dp_optimize(9, &t).unwrap();
    assert_eq!((r.messages, r.n1, r.n2), (96, 5, 4));
    assert_eq!(r.profile.m, vec![2, 2, 3, 3, 4, 4]);
    assert_eq!(dp_optimize(5, &t).unwrap().messages, 9);
    let r = dp_optimize(10, &t).unwrap();
    assert_eq!(r.missing, vec![9]);
    assert_eq!(r.messages, 177);
    assert!(matches!(dp_optimize(3, &BTreeMap::new()), Err(Error::MissingTable(_))));
}

#[test]
fn general_is_deterministic_and_valid() {
    let t = tables(4);
    let a = general_optimize(5, &t, Budget::nodes(5_000), 9).unwrap();
    let b = general_optimize(5, &t, Budget::nodes(5_000), 9).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.count_messages(), 9);
    assert!(a.verify_exhaustive().passed());
    for v in 0..1u32 << a.n1() {
        assert!(a.in_load(v) <= a.free(v));
    }
}
