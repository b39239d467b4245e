use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest word length supported; every enumeration fits in one `u32`.
pub const MAX_LEN: usize = 24;

/// A binary word of length `n`.
///
/// Text form is most-significant position first, so the string `"0011"`
/// is the integer 3 and position 1 is the leftmost character.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u8,
    bits: u32,
}

impl Word {
    pub fn new(len: usize, bits: u32) -> Result<Word> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::BadLength(len));
        }
        if bits >> len != 0 {
            return Err(Error::Overflow { value: bits, len });
        }
        Ok(Word { len: len as u8, bits })
    }

    /// Constructor for callers that already guarantee the invariants.
    #[inline]
    pub(crate) fn from_raw(len: usize, bits: u32) -> Word {
        debug_assert!(len >= 1 && len <= MAX_LEN && bits >> len == 0);
        Word { len: len as u8, bits }
    }

    pub fn zero(len: usize) -> Result<Word> {
        Word::new(len, 0)
    }

    pub fn ones(len: usize) -> Result<Word> {
        Word::new(len, mask(len))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Bit at 1-indexed position `i`, counted from the left.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len());
        self.bits >> (self.len() - i) & 1 == 1
    }

    /// `self` lies in the downward cone of `other` (every 1 of `self` is a 1 of `other`).
    #[inline]
    pub fn is_below(&self, other: &Word) -> bool {
        self.len == other.len && self.bits & other.bits == self.bits
    }
}

#[inline]
pub(crate) fn mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len()).rev() {
            f.write_str(if self.bits >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let len = s.len();
        if len == 0 || len > MAX_LEN {
            return Err(Error::BadLength(len));
        }
        let mut bits = 0u32;
        for (i, c) in s.chars().enumerate() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                other => {
                    return Err(Error::Invalid(format!(
                        "bad bit character {:?} at column {}",
                        other,
                        i + 1
                    )))
                }
            }
        }
        Word::new(len, bits)
    }
}

/// Pairwise Z-channel quantities of two words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZMetrics {
    /// Positions with `a_i = 0, b_i = 1`.
    pub n_ab: u32,
    /// Positions with `b_i = 0, a_i = 1`.
    pub n_ba: u32,
    pub d_z: u32,
    pub d_h: u32,
}

pub fn z_metrics(a: &Word, b: &Word) -> Result<ZMetrics> {
    if a.len != b.len {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(raw_metrics(a.bits, b.bits))
}

#[inline]
pub(crate) fn raw_metrics(a: u32, b: u32) -> ZMetrics {
    let n_ab = (!a & b).count_ones();
    let n_ba = (a & !b).count_ones();
    ZMetrics {
        n_ab,
        n_ba,
        d_z: n_ab.max(n_ba),
        d_h: n_ab + n_ba,
    }
}

/// Z-distance on raw bit patterns.
#[inline]
pub fn raw_dz(a: u32, b: u32) -> u32 {
    (!a & b).count_ones().max((a & !b).count_ones())
}

/// Every word reachable from `c` by at most `t` asymmetric (1 -> 0) errors,
/// in ascending numeric order.
pub fn downward_shadow(c: &Word, t: u32) -> Vec<Word> {
    let w = c.weight();
    let mut out = Vec::new();
    // Enumerate submasks of c.
    let mut sub = c.bits;
    loop {
        if w - sub.count_ones() <= t {
            out.push(Word::from_raw(c.len(), sub));
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & c.bits;
    }
    out.reverse();
    out
}

/// Raw form of the single-error shadow: `c` plus `c` with any one 1 cleared.
#[inline]
pub(crate) fn shadow1_raw(c: u32) -> impl Iterator<Item = u32> {
    let mut rest = c;
    std::iter::once(c).chain(std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let low = rest & rest.wrapping_neg();
        rest &= rest - 1;
        Some(c & !low)
    }))
}
