use crate::zcore::{mask, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Words that degrade to the vertex by one 1→0 flip.
    In,
    /// Words the vertex degrades to by one 1→0 flip.
    Out,
}

/// The degradation graph on all words of length `n1`: an arc `u → v`
/// whenever `v` is `u` with one 1 turned into 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegradationGraph {
    pub n1: usize,
}

impl DegradationGraph {
    pub fn new(n1: usize) -> DegradationGraph {
        DegradationGraph { n1 }
    }

    pub fn vertex_count(&self) -> usize {
        1 << self.n1
    }

    pub fn neighbors(&self, v: &Word, dir: Direction) -> Vec<Word> {
        let raw = match dir {
            Direction::In => in_raw(self.n1, v.bits()),
            Direction::Out => out_raw(v.bits()),
        };
        raw.into_iter().map(|b| Word::from_raw(self.n1, b)).collect()
    }
}

/// In-neighbours of `v`, ascending.
pub(crate) fn in_raw(n1: usize, v: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (0..n1).filter(|&i| v >> i & 1 == 0).map(|i| v | 1 << i).collect();
    out.sort_unstable();
    debug_assert!(out.iter().all(|&u| u <= mask(n1)));
    out
}

/// Out-neighbours of `v`, ascending.
pub(crate) fn out_raw(v: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (0..32).filter(|&i| v >> i & 1 == 1).map(|i| v & !(1 << i)).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let g = DegradationGraph::new(5);
        assert_eq!(g.neighbors(&w("11011"), Direction::In), vec![w("11111")]);
        assert!(g.neighbors(&w("11111"), Direction::In).is_empty());
        assert_eq!(g.neighbors(&w("10100"), Direction::Out), vec![w("00100"), w("10000")]);
        for v in 0..32u32 {
            let v = Word::from_raw(5, v);
            assert_eq!(g.neighbors(&v, Direction::Out).len(), v.weight() as usize);
            assert_eq!(g.neighbors(&v, Direction::In).len(), 5 - v.weight() as usize);
        }
    }
}
