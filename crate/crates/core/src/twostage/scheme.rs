use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::graph::{in_raw, out_raw};
use crate::error::{Error, Result};
use crate::zcore::{mask, shadow1_raw, validate_code, Code, Word};

/// A two-stage scheme: one code of length `n2` per first-stage word of
/// length `n1`, and for every vertex a map from free points to the
/// in-neighbour they stand for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoStageScheme {
    n1: usize,
    n2: usize,
    /// `codes[v]` is `C(v)`.
    codes: Vec<Code>,
    /// `labels[v]` maps a free point of `C(v)` to an in-neighbour of `v`.
    labels: Option<Vec<BTreeMap<u32, u32>>>,
    /// First message index of each vertex's block (0-based), plus the total.
    offsets: Vec<u64>,
}

impl TwoStageScheme {
    /// An unlabeled scheme; `codes[v]` is the code of vertex `v`.
    pub fn new(n1: usize, n2: usize, codes: Vec<Code>) -> Result<TwoStageScheme> {
        if n1 == 0 || n1 + n2 > crate::zcore::MAX_LEN {
            return Err(Error::BadLength(n1 + n2));
        }
        if codes.len() != 1 << n1 {
            return Err(Error::Invalid(format!("expected {} vertex codes, got {}", 1u64 << n1, codes.len())));
        }
        for (v, c) in codes.iter().enumerate() {
            if c.n() != n2 {
                return Err(Error::LengthMismatch(n2, c.n()));
            }
            if c.t() != 1 || !validate_code(c).valid {
                return Err(Error::Invalid(format!(
                    "code of vertex {} does not correct one error",
                    Word::from_raw(n1, v as u32)
                )));
            }
        }
        let mut offsets = Vec::with_capacity(codes.len() + 1);
        let mut total = 0u64;
        for c in &codes {
            offsets.push(total);
            total += c.len() as u64;
        }
        offsets.push(total);
        Ok(TwoStageScheme { n1, n2, codes, labels: None, offsets })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn code(&self, v: &Word) -> &Code {
        &self.codes[v.bits() as usize]
    }

    pub fn codes(&self) -> &[Code] {
        &self.codes
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    /// `M(v)`.
    pub fn size(&self, v: u32) -> u64 {
        self.codes[v as usize].len() as u64
    }

    /// `F(v)`.
    pub fn free(&self, v: u32) -> u64 {
        let c = &self.codes[v as usize];
        (1u64 << self.n2) - c.words().iter().map(|w| w.weight() as u64 + 1).sum::<u64>()
    }

    /// `Σ M(u)` over the in-neighbours of `v`.
    pub fn in_load(&self, v: u32) -> u64 {
        in_raw(self.n1, v).into_iter().map(|u| self.size(u)).sum()
    }

    /// The labeling at `v` (free point → in-neighbour), if labeled.
    pub fn labeling(&self, v: &Word) -> Option<Vec<(Word, Word)>> {
        let labels = self.labels.as_ref()?;
        Some(
            labels[v.bits() as usize]
                .iter()
                .map(|(&p, &u)| (Word::from_raw(self.n2, p), Word::from_raw(self.n1, u)))
                .collect(),
        )
    }

    /// Message `m` (1-based) as (vertex, codeword index).
    pub fn message_pair(&self, m: u64) -> Result<(u32, usize)> {
        let total = *self.offsets.last().unwrap();
        if m == 0 || m > total {
            return Err(Error::BadMessage(m));
        }
        let k = m - 1;
        let v = self.offsets.partition_point(|&o| o <= k) - 1;
        Ok((v as u32, (k - self.offsets[v]) as usize))
    }

    pub fn message_index(&self, u: u32, i: usize) -> u64 {
        self.offsets[u as usize] + i as u64 + 1
    }

    /// Assigns free points to in-neighbours: neighbours in ascending order,
    /// each taking the next `M(u)` free points in ascending order.
    pub fn build_labeling(mut self) -> Result<TwoStageScheme> {
        let mut labels = Vec::with_capacity(self.codes.len());
        for v in 0..self.codes.len() as u32 {
            let load = self.in_load(v);
            let free = self.free_points_raw(v);
            if load > free.len() as u64 {
                return Err(Error::LoadExceeded {
                    vertex: Word::from_raw(self.n1, v).to_string(),
                    load,
                    free: free.len() as u64,
                });
            }
            let mut map = BTreeMap::new();
            let mut next = free.into_iter();
            for u in in_raw(self.n1, v) {
                for _ in 0..self.size(u) {
                    map.insert(next.next().unwrap(), u);
                }
            }
            labels.push(map);
        }
        self.labels = Some(labels);
        Ok(self)
    }

    fn covered(&self, v: u32) -> Vec<bool> {
        let mut covered = vec![false; 1 << self.n2];
        for c in self.codes[v as usize].words() {
            for p in shadow1_raw(c.bits()) {
                covered[p as usize] = true;
            }
        }
        covered
    }

    fn free_points_raw(&self, v: u32) -> Vec<u32> {
        let covered = self.covered(v);
        (0..1u32 << self.n2).filter(|&p| !covered[p as usize]).collect()
    }

    fn labels(&self) -> Result<&Vec<BTreeMap<u32, u32>>> {
        self.labels.as_ref().ok_or_else(|| Error::Invalid("scheme is not labeled".into()))
    }

    /// Total number of messages `Σ M(v)`.
    pub fn count_messages(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    /// The two transmitted parts for message `m` given the received first part.
    pub fn encode(&self, m: u64, feedback: &Word) -> Result<(Word, Word)> {
        if feedback.len() != self.n1 {
            return Err(Error::LengthMismatch(self.n1, feedback.len()));
        }
        let (u, i) = self.message_pair(m)?;
        let first = Word::from_raw(self.n1, u);
        let fb = feedback.bits();
        if fb == u {
            return Ok((first, self.codes[u as usize].words()[i]));
        }
        if !out_raw(u).contains(&fb) {
            return Err(Error::Unreachable { sent: first.to_string(), feedback: feedback.to_string() });
        }
        let labels = self.labels()?;
        let p = labels[fb as usize]
            .iter()
            .filter(|(_, &owner)| owner == u)
            .map(|(&p, _)| p)
            .nth(i)
            .ok_or_else(|| Error::Invalid(format!("quota of {} at {} is short", first, feedback)))?;
        Ok((first, Word::from_raw(self.n2, p)))
    }

    /// Decodes a received word of length `n1 + n2`.
    pub fn decode(&self, y: &Word) -> Result<u64> {
        if y.len() != self.n1 + self.n2 {
            return Err(Error::LengthMismatch(self.n1 + self.n2, y.len()));
        }
        let v = y.bits() >> self.n2;
        let p = y.bits() & mask(self.n2);
        for (i, c) in self.codes[v as usize].words().iter().enumerate() {
            if shadow1_raw(c.bits()).any(|s| s == p) {
                return Ok(self.message_index(v, i));
            }
        }
        let labels = self.labels()?;
        match labels[v as usize].get(&p) {
            Some(&u) => {
                let rank = labels[v as usize].range(..p).filter(|(_, &o)| o == u).count();
                Ok(self.message_index(u, rank))
            }
            None => Err(Error::UnreachableWord(y.to_string())),
        }
    }

    fn join(&self, a: &Word, b: &Word) -> Word {
        Word::from_raw(self.n1 + self.n2, a.bits() << self.n2 | b.bits())
    }

    /// Sends every message through every admissible single-error pattern.
    pub fn verify_exhaustive(&self) -> VerificationReport {
        let mut report = VerificationReport { cases: 0, failures: 0, first_failure: None };
        for m in 1..=self.count_messages() {
            let (u, _) = self.message_pair(m).unwrap();
            let sent = Word::from_raw(self.n1, u);
            let mut feedbacks = vec![(sent, None)];
            for v in out_raw(u) {
                let pos = self.n1 - (u ^ v).trailing_zeros() as usize;
                feedbacks.push((Word::from_raw(self.n1, v), Some(pos)));
            }
            for (fb, first_error) in feedbacks {
                let parts = self.encode(m, &fb);
                let mut check = |second_error: Option<usize>, y: Result<Word>| {
                    report.cases += 1;
                    let decoded = y.and_then(|y| self.decode(&y));
                    if decoded.as_ref().ok() != Some(&m) {
                        report.failures += 1;
                        if report.first_failure.is_none() {
                            report.first_failure = Some(FailureCase {
                                message: m,
                                first_error,
                                second_error,
                                decoded: decoded.as_ref().ok().copied(),
                                detail: decoded.err().map(|e| e.to_string()),
                            });
                        }
                    }
                };
                let parts = match parts {
                    Ok(p) => p,
                    Err(e) => {
                        check(None, Err(e));
                        continue;
                    }
                };
                check(None, Ok(self.join(&fb, &parts.1)));
                if first_error.is_none() {
                    let c = parts.1.bits();
                    for j in 0..self.n2 {
                        if c >> j & 1 == 1 {
                            let hit = Word::from_raw(self.n2, c & !(1 << j));
                            check(Some(self.n2 - j), Ok(self.join(&fb, &hit)));
                        }
                    }
                }
            }
        }
        report
    }

    pub fn to_file(&self) -> SchemeFile {
        let n1 = self.n1;
        let vertices = self
            .codes
            .iter()
            .enumerate()
            .map(|(v, c)| (Word::from_raw(n1, v as u32).to_string(), c.words().iter().map(|w| w.to_string()).collect()))
            .collect();
        let labeling = self.labels.as_ref().map(|labels| {
            labels
                .iter()
                .enumerate()
                .filter(|(_, m)| !m.is_empty())
                .map(|(v, m)| {
                    let inner = m
                        .iter()
                        .map(|(&p, &u)| (Word::from_raw(self.n2, p).to_string(), Word::from_raw(n1, u).to_string()))
                        .collect();
                    (Word::from_raw(n1, v as u32).to_string(), inner)
                })
                .collect()
        });
        SchemeFile { n1, n2: self.n2, vertices, labeling }
    }

    /// Rebuilds a scheme from its file form, checking every label against
    /// the quota rule (`M(u)` points per in-neighbour, all free).
    pub fn from_file(f: &SchemeFile) -> Result<TwoStageScheme> {
        let mut codes = Vec::with_capacity(1 << f.n1);
        for v in 0..1u32 << f.n1 {
            let key = Word::from_raw(f.n1, v).to_string();
            let words = f.vertices.get(&key).ok_or_else(|| Error::Invalid(format!("no code for vertex {}", key)))?;
            let words = words.iter().map(|s| s.parse::<Word>()).collect::<Result<Vec<_>>>()?;
            codes.push(Code::new(f.n2, 1, words)?);
        }
        if f.vertices.len() != codes.len() {
            return Err(Error::Invalid("unknown vertex in scheme file".into()));
        }
        let mut s = TwoStageScheme::new(f.n1, f.n2, codes)?;
        let Some(labeling) = &f.labeling else { return Ok(s) };
        let mut labels = vec![BTreeMap::new(); s.codes.len()];
        for (vs, inner) in labeling {
            let v = parse_len(vs, f.n1)?;
            let covered = s.covered(v);
            let ins = in_raw(f.n1, v);
            for (ps, us) in inner {
                let p = parse_len(ps, f.n2)?;
                let u = parse_len(us, f.n1)?;
                if covered[p as usize] || !ins.contains(&u) {
                    return Err(Error::Invalid(format!("bad label {} -> {} at vertex {}", ps, us, vs)));
                }
                labels[v as usize].insert(p, u);
            }
        }
        for v in 0..s.codes.len() as u32 {
            for u in in_raw(f.n1, v) {
                let got = labels[v as usize].values().filter(|&&o| o == u).count() as u64;
                if got != s.size(u) {
                    return Err(Error::Invalid(format!(
                        "vertex {} gives {} points to {}, expected {}",
                        Word::from_raw(f.n1, v),
                        got,
                        Word::from_raw(f.n1, u),
                        s.size(u)
                    )));
                }
            }
        }
        s.labels = Some(labels);
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("scheme serializes")
    }

    pub fn from_json(text: &str) -> Result<TwoStageScheme> {
        TwoStageScheme::from_file(&serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<TwoStageScheme> {
        TwoStageScheme::from_json(&fs::read_to_string(path)?)
    }

    /// Moves one free point of `v` from its owner to another in-neighbour;
    /// used to check that verification notices broken quotas.
    #[doc(hidden)]
    pub fn corrupt_label(&mut self, v: &Word) -> bool {
        let n1 = self.n1;
        let Some(labels) = self.labels.as_mut() else { return false };
        let map = &mut labels[v.bits() as usize];
        let ins = in_raw(n1, v.bits());
        let Some((&p, &owner)) = map.iter().next() else { return false };
        let Some(&other) = ins.iter().find(|&&u| u != owner) else {
            map.remove(&p);
            return true;
        };
        map.insert(p, other);
        true
    }
}

fn parse_len(s: &str, len: usize) -> Result<u32> {
    let w: Word = s.parse()?;
    if w.len() != len {
        return Err(Error::LengthMismatch(len, w.len()));
    }
    Ok(w.bits())
}

/// JSON form of a scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeFile {
    pub n1: usize,
    pub n2: usize,
    pub vertices: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labeling: Option<BTreeMap<String, BTreeMap<String, String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCase {
    pub message: u64,
    /// 1-based position of the flipped bit in the first part.
    pub first_error: Option<usize>,
    /// 1-based position of the flipped bit in the second part.
    pub second_error: Option<usize>,
    pub decoded: Option<u64>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<FailureCase>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}
