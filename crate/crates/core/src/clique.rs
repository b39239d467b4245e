//! Dense-bitset maximum clique with greedy-colouring bounds.

use crate::budget::Meter;

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct BitSet {
    blocks: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> BitSet {
        BitSet { blocks: vec![0; (len + 63) / 64] }
    }

    pub fn full(len: usize) -> BitSet {
        let mut s = BitSet::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.blocks[i / 64] &= !(1 << (i % 64));
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn and(&self, other: &BitSet) -> BitSet {
        BitSet {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn and_not_assign(&mut self, other: &BitSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.blocks
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
            .map(|(k, b)| k * 64 + b.trailing_zeros() as usize)
    }

    #[cfg(test)]
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(k, &b)| {
            let mut rest = b;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(k * 64 + i)
            })
        })
    }
}

/// Result of [`max_clique`]: the best clique found and whether the search finished.
pub(crate) struct CliqueResult {
    pub clique: Vec<usize>,
    pub complete: bool,
}

/// Maximum clique of the graph given by adjacency bitsets.
///
/// `seed` is an initial clique (e.g. from a greedy pass), `forced` vertices are
/// placed in every clique considered and `stop_at` ends the search early once
/// reached (a known upper bound).
pub(crate) fn max_clique(
    adj: &[BitSet],
    forced: &[usize],
    seed: Vec<usize>,
    stop_at: usize,
    meter: &mut Meter,
) -> CliqueResult {
    let n = adj.len();
    let mut cand = BitSet::full(n);
    for &f in forced {
        cand = cand.and(&adj[f]);
    }
    let mut state = Search {
        adj,
        best: seed,
        stop_at,
        meter,
        aborted: false,
    };
    let mut current = forced.to_vec();
    if state.best.len() < stop_at {
        state.expand(&mut current, cand);
    }
    let complete = !state.aborted;
    CliqueResult { clique: state.best, complete }
}

struct Search<'a> {
    adj: &'a [BitSet],
    best: Vec<usize>,
    stop_at: usize,
    meter: &'a mut Meter,
    aborted: bool,
}

impl Search<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, mut cand: BitSet) {
        if !self.meter.tick() {
            self.aborted = true;
            return;
        }
        if cand.is_empty() {
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            return;
        }
        let (order, colours) = self.colour(&cand);
        for idx in (0..order.len()).rev() {
            if current.len() + colours[idx] <= self.best.len() || self.best.len() >= self.stop_at {
                return;
            }
            let v = order[idx];
            current.push(v);
            let next = cand.and(&self.adj[v]);
            self.expand(current, next);
            current.pop();
            if self.aborted {
                return;
            }
            cand.remove(v);
        }
    }

    /// Greedy sequential colouring; returns vertices in colour order with
    /// the running colour count as a bound for each prefix.
    fn colour(&self, cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = cand.clone();
        let mut order = Vec::with_capacity(cand.count());
        let mut colours = Vec::with_capacity(order.capacity());
        let mut k = 0;
        while !uncoloured.is_empty() {
            k += 1;
            let mut avail = uncoloured.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail.and_not_assign(&self.adj[v]);
                uncoloured.remove(v);
                order.push(v);
                colours.push(k);
            }
        }
        (order, colours)
    }
}
