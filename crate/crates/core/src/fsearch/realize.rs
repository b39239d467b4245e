//! Exhaustive search for a single-error code with a prescribed weight distribution.
//!
//! Codewords are placed weight class by weight class (ascending), and inside
//! a class in ascending numeric order. The first word of every class is
//! required to be minimal in its orbit under the column permutations that fix
//! every word already placed; this keeps one representative per isomorphism
//! class of the partial code without losing any distribution.

use crate::budget::Meter;
use crate::zcore::mask;

/// Precomputed word lists and Z-distance-1 neighbourhoods for one length.
pub(crate) struct Space {
    pub n: usize,
    pub by_weight: Vec<Vec<u32>>,
    /// Words at Z-distance exactly 1 from each word.
    pub conflicts: Vec<Vec<u32>>,
}

impl Space {
    pub fn new(n: usize) -> Space {
        let size = 1usize << n;
        let mut by_weight = vec![Vec::new(); n + 1];
        for x in 0..size as u32 {
            by_weight[x.count_ones() as usize].push(x);
        }
        let full = mask(n);
        let conflicts = (0..size as u32)
            .map(|x| {
                let mut out = Vec::new();
                let ones: Vec<u32> = (0..n).filter(|&i| x >> i & 1 == 1).map(|i| 1 << i).collect();
                let zeros: Vec<u32> = (0..n).filter(|&i| x >> i & 1 == 0).map(|i| 1 << i).collect();
                for &o in &ones {
                    out.push(x & !o);
                }
                for &z in &zeros {
                    out.push(x | z);
                }
                for &o in &ones {
                    for &z in &zeros {
                        out.push((x & !o) | z);
                    }
                }
                debug_assert!(out.iter().all(|&y| y & !full == 0));
                out.sort_unstable();
                out
            })
            .collect();
        Space { n, by_weight, conflicts }
    }
}

/// Outcome of a realisation attempt.
pub(crate) enum Realized {
    Found(Vec<u32>),
    Impossible,
    OutOfBudget,
}

pub(crate) struct Realizer<'a> {
    space: &'a Space,
    /// Words still compatible with every placed codeword (and not placed).
    allowed: Vec<bool>,
    allowed_by_weight: Vec<usize>,
    /// Weight-(w-1) points already used by the shadow of a placed word, or placed themselves.
    used: Vec<bool>,
    trail: Vec<u32>,
    used_trail: Vec<u32>,
    chosen: Vec<u32>,
    need: Vec<u64>,
    meter: &'a mut Meter,
    aborted: bool,
}

impl<'a> Realizer<'a> {
    pub fn new(space: &'a Space, meter: &'a mut Meter) -> Realizer<'a> {
        let size = 1usize << space.n;
        Realizer {
            space,
            allowed: vec![true; size],
            allowed_by_weight: space.by_weight.iter().map(Vec::len).collect(),
            used: vec![false; size],
            trail: Vec::new(),
            used_trail: Vec::new(),
            chosen: Vec::new(),
            need: Vec::new(),
            meter,
            aborted: false,
        }
    }

    /// Searches for a code containing `0^n` whose weight distribution is `z`
    /// (`z[0]` must be 1 and `z[1]` 0).
    pub fn realize(mut self, z: &[u64]) -> Realized {
        assert_eq!(z.len(), self.space.n + 1);
        if z[0] != 1 || z[1] != 0 {
            return Realized::Impossible;
        }
        self.need = z.to_vec();
        self.place(0);
        self.need[0] = 0;
        let found = self.class(1);
        if found {
            let mut c = self.chosen.clone();
            c.sort_unstable();
            Realized::Found(c)
        } else if self.aborted {
            Realized::OutOfBudget
        } else {
            Realized::Impossible
        }
    }

    fn place(&mut self, x: u32) -> (usize, usize) {
        let mark = (self.trail.len(), self.used_trail.len());
        self.chosen.push(x);
        let drop = |r: &mut Self, y: u32| {
            if r.allowed[y as usize] {
                r.allowed[y as usize] = false;
                r.allowed_by_weight[y.count_ones() as usize] -= 1;
                r.trail.push(y);
            }
        };
        drop(self, x);
        for &y in &self.space.conflicts[x as usize] {
            drop(self, y);
        }
        for p in crate::zcore::shadow1_raw(x) {
            if !self.used[p as usize] {
                self.used[p as usize] = true;
                self.used_trail.push(p);
            }
        }
        mark
    }

    fn unplace(&mut self, mark: (usize, usize)) {
        self.chosen.pop();
        while self.trail.len() > mark.0 {
            let y = self.trail.pop().unwrap();
            self.allowed[y as usize] = true;
            self.allowed_by_weight[y.count_ones() as usize] += 1;
        }
        while self.used_trail.len() > mark.1 {
            let p = self.used_trail.pop().unwrap();
            self.used[p as usize] = false;
        }
    }

    /// Cheap necessary conditions for the remaining classes.
    fn feasible(&self, w: usize) -> bool {
        for v in w..=self.space.n {
            if self.need[v] > self.allowed_by_weight[v] as u64 {
                return false;
            }
        }
        // Each further weight-w word needs w private, unused points one level down.
        if w >= 1 && self.need[w] > 0 {
            let free_below = self.space.by_weight[w - 1]
                .iter()
                .filter(|&&p| !self.used[p as usize] && self.has_allowed_above(p, w))
                .count() as u64;
            if self.need[w] * w as u64 > free_below {
                return false;
            }
        }
        true
    }

    fn has_allowed_above(&self, p: u32, _w: usize) -> bool {
        (0..self.space.n).any(|i| p >> i & 1 == 0 && self.allowed[(p | 1 << i) as usize])
    }

    /// Starts weight class `w`.
    fn class(&mut self, w: usize) -> bool {
        let n = self.space.n;
        let mut w = w;
        while w <= n && self.need[w] == 0 {
            w += 1;
        }
        if w > n {
            return true;
        }
        if !self.feasible(w) {
            return false;
        }
        let classes = column_classes(n, &self.chosen);
        let words = &self.space.by_weight[w];
        let cands: Vec<(usize, u32)> = words
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, x)| self.allowed[x as usize] && orbit_minimal(x, &classes))
            .collect();
        for (idx, x) in cands {
            if !self.meter.tick() {
                self.aborted = true;
                return false;
            }
            let mark = self.place(x);
            self.need[w] -= 1;
            let found = self.within(w, idx + 1);
            self.need[w] += 1;
            if found {
                return true;
            }
            self.unplace(mark);
            if self.aborted {
                return false;
            }
        }
        false
    }

    /// Continues class `w` with words of index `>= start`.
    fn within(&mut self, w: usize, start: usize) -> bool {
        if self.need[w] == 0 {
            return self.class(w + 1);
        }
        if !self.feasible(w) {
            return false;
        }
        let words = &self.space.by_weight[w];
        let cands: Vec<(usize, u32)> = words[start..]
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, x)| self.allowed[x as usize])
            .map(|(i, x)| (i + start, x))
            .collect();
        let k = self.need[w] as usize;
        if cands.len() < k {
            return false;
        }
        for j in 0..=(cands.len() - k) {
            let (idx, x) = cands[j];
            if !self.allowed[x as usize] {
                continue;
            }
            if !self.meter.tick() {
                self.aborted = true;
                return false;
            }
            let mark = self.place(x);
            self.need[w] -= 1;
            let found = self.within(w, idx + 1);
            self.need[w] += 1;
            if found {
                return true;
            }
            self.unplace(mark);
            if self.aborted {
                return false;
            }
        }
        false
    }
}

/// Partition of the columns by their bit vector across `words`; each class is
/// a bit mask of interchangeable columns.
pub(crate) fn column_classes(n: usize, words: &[u32]) -> Vec<u32> {
    let mut classes: Vec<u32> = vec![mask(n)];
    for &x in words {
        let mut next = Vec::with_capacity(classes.len() * 2);
        for c in classes {
            let a = c & x;
            let b = c & !x;
            if a != 0 {
                next.push(a);
            }
            if b != 0 {
                next.push(b);
            }
        }
        classes = next;
    }
    classes
}

/// Within each class, the ones of `x` sit on the least significant columns.
pub(crate) fn orbit_minimal(x: u32, classes: &[u32]) -> bool {
    classes.iter().all(|&c| {
        let k = (x & c).count_ones();
        let mut low = 0u32;
        let mut rest = c;
        for _ in 0..k {
            low |= rest & rest.wrapping_neg();
            rest &= rest - 1;
        }
        x & c == low
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::zcore::raw_dz;

    #[test]
    fn conflicts_are_distance_one() {
        let s = Space::new(5);
        for x in 0..32u32 {
            let expect: Vec<u32> = (0..32u32).filter(|&y| raw_dz(x, y) == 1).collect();
            assert_eq!(s.conflicts[x as usize], expect);
        }
    }

    #[test]
    fn classes_and_orbits() {
        assert_eq!(column_classes(4, &[]), vec![0b1111]);
        let c = column_classes(4, &[0b0011]);
        assert_eq!(c, vec![0b0011, 0b1100]);
        assert!(orbit_minimal(0b0011, &column_classes(4, &[])));
        assert!(!orbit_minimal(0b0101, &column_classes(4, &[])));
        assert!(orbit_minimal(0b0101, &c));
        assert!(!orbit_minimal(0b1001, &c));
    }

    #[test]
    fn realizes_small_distributions() {
        let s = Space::new(4);
        let mut m = Budget::unlimited().meter();
        match Realizer::new(&s, &mut m).realize(&[1, 0, 2, 0, 1]) {
            Realized::Found(c) => assert_eq!(c, vec![0, 3, 12, 15]),
            _ => panic!("expected a code"),
        }
        let mut m = Budget::unlimited().meter();
        assert!(matches!(Realizer::new(&s, &mut m).realize(&[1, 0, 3, 0, 0]), Realized::Impossible));
    }
}

