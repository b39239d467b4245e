use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::{mask, raw_dz, shadow1_raw, Word, MAX_LEN};
use crate::error::{Error, Result};

/// A binary code of length `n` meant to correct `t` asymmetric errors.
///
/// Words are kept sorted ascending by value and duplicate-free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Code {
    n: usize,
    t: u32,
    words: Vec<Word>,
}

impl Code {
    pub fn new(n: usize, t: u32, mut words: Vec<Word>) -> Result<Code> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::BadLength(n));
        }
        for w in &words {
            if w.len() != n {
                return Err(Error::LengthMismatch(n, w.len()));
            }
        }
        words.sort();
        if let Some(pair) = words.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::Invalid(format!("duplicate codeword {}", pair[0])));
        }
        Ok(Code { n, t, words })
    }

    pub fn from_bits(n: usize, t: u32, bits: &[u32]) -> Result<Code> {
        let words = bits.iter().map(|&b| Word::new(n, b)).collect::<Result<Vec<_>>>()?;
        Code::new(n, t, words)
    }

    /// Parse whitespace-separated binary strings, e.g. `"0000 0011"`.
    pub fn from_strs(t: u32, words: &str) -> Result<Code> {
        let words = words
            .split_whitespace()
            .map(|s| s.parse::<Word>())
            .collect::<Result<Vec<_>>>()?;
        let n = words.first().map(|w| w.len()).ok_or(Error::Invalid(
            "cannot infer length of an empty code".into(),
        ))?;
        Code::new(n, t, words)
    }

    pub fn empty(n: usize, t: u32) -> Result<Code> {
        Code::new(n, t, Vec::new())
    }

    pub(crate) fn from_sorted_raw(n: usize, t: u32, bits: &[u32]) -> Code {
        debug_assert!(bits.windows(2).all(|p| p[0] < p[1]));
        Code {
            n,
            t,
            words: bits.iter().map(|&b| Word::from_raw(n, b)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn bits(&self) -> Vec<u32> {
        self.words.iter().map(|w| w.bits()).collect()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.words.binary_search(w).ok()
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code(n={}, t={}, {{", self.n, self.t)?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", w)?;
        }
        f.write_str("})")
    }
}

/// Outcome of [`validate_code`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    /// Minimum Z-distance over distinct pairs; `None` for codes with fewer than two words.
    pub min_dz: Option<u32>,
    /// For `t = 1`, whether the single-error downward shadows are pairwise disjoint.
    pub shadows_disjoint: Option<bool>,
    /// First pair (in canonical order) falling below the threshold, with its Z-distance.
    pub violation: Option<(String, String, u32)>,
}

/// Checks the pairwise condition `d_Z >= 2t` for a canonical code.
pub fn validate_code(code: &Code) -> ValidationReport {
    let need = 2 * code.t;
    let bits = code.bits();
    let mut min_dz: Option<u32> = None;
    let mut violation = None;
    for (i, &a) in bits.iter().enumerate() {
        for &b in &bits[i + 1..] {
            let d = raw_dz(a, b);
            if min_dz.map_or(true, |m| d < m) {
                min_dz = Some(d);
            }
            if d < need && violation.is_none() {
                violation = Some((
                    Word::from_raw(code.n, a).to_string(),
                    Word::from_raw(code.n, b).to_string(),
                    d,
                ));
            }
        }
    }
    let shadows_disjoint = (code.t == 1).then(|| shadows_disjoint(code.n, &bits));
    ValidationReport {
        valid: violation.is_none(),
        min_dz,
        shadows_disjoint,
        violation,
    }
}

fn shadows_disjoint(n: usize, bits: &[u32]) -> bool {
    let mut seen = vec![0u64; ((1usize << n) + 63) / 64];
    for &c in bits {
        for p in shadow1_raw(c) {
            let (k, b) = (p as usize / 64, p as usize % 64);
            if seen[k] >> b & 1 == 1 {
                return false;
            }
            seen[k] |= 1 << b;
        }
    }
    true
}

/// Points of `{0,1}^n` outside every codeword's downward `t`-shadow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreePoints {
    pub count: u64,
    pub points: Vec<Word>,
}

pub fn free_points(code: &Code) -> Result<FreePoints> {
    let report = validate_code(code);
    if let Some((a, b, d)) = report.violation {
        return Err(Error::InvalidCode(a, b, d));
    }
    let n = code.n;
    let mut covered = vec![false; 1usize << n];
    for c in &code.words {
        for p in super::word::downward_shadow(c, code.t) {
            covered[p.bits() as usize] = true;
        }
    }
    let points: Vec<Word> = (0..=mask(n))
        .filter(|&p| !covered[p as usize])
        .map(|p| Word::from_raw(n, p))
        .collect();
    Ok(FreePoints {
        count: points.len() as u64,
        points,
    })
}

/// Free-point count of a valid single-error code by the closed form `2^n - sum(w+1)`.
pub(crate) fn free_count_raw(n: usize, bits: &[u32]) -> u64 {
    (1u64 << n) - bits.iter().map(|b| b.count_ones() as u64 + 1).sum::<u64>()
}

/// Number of codewords of each weight, `z_0..z_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub n: usize,
    pub z: Vec<u64>,
}

impl WeightDistribution {
    pub fn new(z: Vec<u64>) -> WeightDistribution {
        WeightDistribution { n: z.len() - 1, z }
    }

    pub fn size(&self) -> u64 {
        self.z.iter().sum()
    }

    /// Points covered by single-error shadows, `sum z_i (i + 1)`.
    pub fn coverage(&self) -> u64 {
        self.z.iter().enumerate().map(|(i, &z)| z * (i as u64 + 1)).sum()
    }

    /// Free points implied for a valid `t = 1` code with this distribution.
    pub fn free_points(&self) -> i64 {
        (1i64 << self.n) - self.coverage() as i64
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.z.iter().map(|z| z.to_string()).collect();
        f.write_str(&parts.join("+"))
    }
}

pub fn weight_distribution(code: &Code) -> WeightDistribution {
    let mut z = vec![0u64; code.n + 1];
    for w in &code.words {
        z[w.weight() as usize] += 1;
    }
    WeightDistribution { n: code.n, z }
}

/// The Varshamov-Tenengolts code `{x : sum_i i*x_i = a (mod n+1)}`, positions
/// numbered 1..n from the left.
pub fn vt_code(n: usize, a: usize) -> Result<Code> {
    if n == 0 || n > MAX_LEN {
        return Err(Error::BadLength(n));
    }
    if a > n {
        return Err(Error::Invalid(format!("residue {} exceeds length {}", a, n)));
    }
    let modulus = n as u64 + 1;
    let bits: Vec<u32> = (0..=mask(n))
        .filter(|&x| {
            let s: u64 = (0..n)
                .filter(|&k| x >> k & 1 == 1)
                .map(|k| (n - k) as u64)
                .sum();
            s % modulus == a as u64
        })
        .collect();
    Ok(Code::from_sorted_raw(n, 1, &bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> Code {
        Code::from_strs(1, s).unwrap()
    }

    #[test]
    fn validate_examples() {
        let r = validate_code(&code("0000 0011 1100 1111"));
        assert!(r.valid);
        assert_eq!(r.min_dz, Some(2));
        assert_eq!(r.shadows_disjoint, Some(true));

        let r = validate_code(&code("00 01"));
        assert!(!r.valid);
        assert_eq!(r.violation, Some(("00".into(), "01".into(), 1)));
        assert_eq!(r.shadows_disjoint, Some(false));

        let r = validate_code(&code("0110"));
        assert!(r.valid);
        assert_eq!(r.min_dz, None);
    }

    #[test]
    fn free_point_examples() {
        assert_eq!(free_points(&code("0000 0011")).unwrap().count, 12);
        assert_eq!(free_points(&code("00 11")).unwrap().count, 0);
        assert_eq!(free_points(&Code::empty(2, 1).unwrap()).unwrap().count, 4);
        let f = free_points(&code("0000 0011 1100 1111")).unwrap();
        let pts: Vec<String> = f.points.iter().map(|w| w.to_string()).collect();
        assert_eq!(pts, ["0101", "0110", "1001", "1010"]);
        assert!(matches!(free_points(&code("00 01")), Err(Error::InvalidCode(..))));
    }

    #[test]
    fn weight_distribution_examples() {
        assert_eq!(weight_distribution(&code("0000 0011 1100 1111")).z, vec![1, 0, 2, 0, 1]);
        assert_eq!(weight_distribution(&Code::empty(3, 1).unwrap()).z, vec![0; 4]);
        let wd = WeightDistribution::new(vec![1, 0, 3, 4, 3, 0, 1]);
        assert_eq!(wd.size(), 12);
        assert_eq!(wd.free_points(), 16);
        assert_eq!(wd.to_string(), "1+0+3+4+3+0+1");
    }

    #[test]
    fn vt_examples() {
        assert_eq!(vt_code(4, 0).unwrap(), code("0000 0110 1001 1111"));
        assert_eq!(vt_code(2, 0).unwrap(), code("00 11"));
        assert!(validate_code(&vt_code(6, 0).unwrap()).valid);
        assert!(vt_code(4, 5).is_err());
    }

    #[test]
    fn duplicate_rejected() {
        assert!(Code::from_strs(1, "0011 0011").is_err());
        assert!(Code::from_strs(1, "0011 011").is_err());
    }
}
