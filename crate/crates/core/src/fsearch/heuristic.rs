//! Iterated local search for large independent sets of the conflict graph
//! (words at Z-distance 1), in the style of Andrade, Resende and Werneck:
//! (1,2)-swaps to grow the set, forced single insertions as perturbation.
//!
//! With `weighted` set, ties in size are broken by smaller coverage
//! `Σ (weight + 1)`, i.e. by more free points.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::realize::Space;
use crate::budget::{Budget, Meter};
use crate::zcore::{raw_dz, vt_code, Code};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicResult {
    pub code: Code,
    pub target: usize,
    pub reached: bool,
    /// Perturbation rounds performed.
    pub rounds: u64,
}

/// Largest single-error code found by local search, seeded from the
/// Varshamov-Tenengolts codes. Stops early once `target` words are reached.
/// Deterministic for a fixed `seed` and node budget.
pub fn heuristic_search(n: usize, target: usize, budget: Budget, seed: u64) -> HeuristicResult {
    let space = Space::new(n);
    let start = vt_start(n);
    let mut ils = Ils::new(&space, false, seed);
    let mut meter = budget.meter();
    let best = ils.run(&start, target, &mut meter);
    let code = Code::from_sorted_raw(n, 1, &best);
    HeuristicResult { reached: code.len() >= target, target, code, rounds: meter.used() }
}

/// Local search on (size, free points); `start` seeds the search.
pub(crate) fn weighted_search(space: &Space, start: &[u32], seed: u64, meter: &mut Meter) -> Vec<u32> {
    let mut ils = Ils::new(space, true, seed);
    ils.run(start, usize::MAX, meter)
}

/// The largest code `VT_a(n)`.
pub(crate) fn vt_start(n: usize) -> Vec<u32> {
    (0..=n)
        .filter_map(|a| vt_code(n, a).ok())
        .max_by_key(|c| (c.len(), std::cmp::Reverse(c.bits())))
        .map(|c| c.bits())
        .unwrap_or_default()
}

struct Ils<'a> {
    space: &'a Space,
    weighted: bool,
    rng: ChaCha8Rng,
    in_s: Vec<bool>,
    tight: Vec<u32>,
    sol: Vec<u32>,
    pos: Vec<usize>,
    free: Vec<u32>,
    fpos: Vec<usize>,
    cover: u64,
    /// Round at which each vertex last left the solution.
    age: Vec<u64>,
    round: u64,
}

const NONE: usize = usize::MAX;

impl<'a> Ils<'a> {
    fn new(space: &'a Space, weighted: bool, seed: u64) -> Ils<'a> {
        let size = 1usize << space.n;
        Ils {
            space,
            weighted,
            rng: ChaCha8Rng::seed_from_u64(seed),
            in_s: vec![false; size],
            tight: vec![0; size],
            sol: Vec::new(),
            pos: vec![NONE; size],
            free: (0..size as u32).collect(),
            fpos: (0..size).collect(),
            cover: 0,
            age: vec![0; size],
            round: 0,
        }
    }

    fn cost(&self, v: u32) -> u64 {
        if self.weighted {
            v.count_ones() as u64 + 1
        } else {
            0
        }
    }

    /// Comparison key: larger is better.
    fn key(&self) -> (usize, std::cmp::Reverse<u64>) {
        (self.sol.len(), std::cmp::Reverse(self.cover))
    }

    fn free_remove(&mut self, v: u32) {
        let i = self.fpos[v as usize];
        if i == NONE {
            return;
        }
        let last = *self.free.last().unwrap();
        self.free.swap_remove(i);
        if last != v {
            self.fpos[last as usize] = i;
        }
        self.fpos[v as usize] = NONE;
    }

    fn free_add(&mut self, v: u32) {
        if self.fpos[v as usize] == NONE {
            self.fpos[v as usize] = self.free.len();
            self.free.push(v);
        }
    }

    fn insert(&mut self, v: u32) {
        debug_assert!(!self.in_s[v as usize] && self.tight[v as usize] == 0);
        self.in_s[v as usize] = true;
        self.pos[v as usize] = self.sol.len();
        self.sol.push(v);
        self.cover += self.cost(v);
        self.free_remove(v);
        for k in 0..self.space.conflicts[v as usize].len() {
            let u = self.space.conflicts[v as usize][k];
            self.tight[u as usize] += 1;
            if self.tight[u as usize] == 1 {
                self.free_remove(u);
            }
        }
    }

    fn remove(&mut self, v: u32) {
        debug_assert!(self.in_s[v as usize]);
        self.in_s[v as usize] = false;
        let i = self.pos[v as usize];
        let last = *self.sol.last().unwrap();
        self.sol.swap_remove(i);
        if last != v {
            self.pos[last as usize] = i;
        }
        self.pos[v as usize] = NONE;
        self.cover -= self.cost(v);
        self.age[v as usize] = self.round;
        for k in 0..self.space.conflicts[v as usize].len() {
            let u = self.space.conflicts[v as usize][k];
            self.tight[u as usize] -= 1;
            if self.tight[u as usize] == 0 && !self.in_s[u as usize] {
                self.free_add(u);
            }
        }
        if self.tight[v as usize] == 0 {
            self.free_add(v);
        }
    }

    fn clear(&mut self) {
        while let Some(&v) = self.sol.last() {
            self.remove(v);
        }
    }

    fn load(&mut self, words: &[u32]) {
        self.clear();
        for &v in words {
            if !self.in_s[v as usize] && self.tight[v as usize] == 0 {
                self.insert(v);
            }
        }
    }

    /// Inserts free vertices until none is left (cheapest first when weighted).
    fn fill(&mut self) {
        while !self.free.is_empty() {
            let v = if self.weighted {
                let best = self.free.iter().map(|&v| self.cost(v)).min().unwrap();
                let ties: Vec<u32> = self.free.iter().copied().filter(|&v| self.cost(v) == best).collect();
                ties[self.rng.gen_range(0..ties.len())]
            } else {
                self.free[self.rng.gen_range(0..self.free.len())]
            };
            self.insert(v);
        }
    }

    /// Applies (1,2)-swaps, and cost-reducing (1,1)-swaps when weighted,
    /// until none applies.
    fn local_search(&mut self) {
        self.fill();
        loop {
            let mut improved = false;
            let mut order = self.sol.clone();
            order.shuffle(&mut self.rng);
            for x in order {
                if !self.in_s[x as usize] {
                    continue;
                }
                let ones: Vec<u32> = self.space.conflicts[x as usize]
                    .iter()
                    .copied()
                    .filter(|&u| self.tight[u as usize] == 1)
                    .collect();
                if let Some((u, w)) = self.best_pair(&ones) {
                    self.remove(x);
                    self.insert(u);
                    self.insert(w);
                    self.fill();
                    improved = true;
                    continue;
                }
                if self.weighted {
                    let cx = self.cost(x);
                    if let Some(&u) = ones.iter().filter(|&&u| self.cost(u) < cx).min_by_key(|&&u| self.cost(u)) {
                        self.remove(x);
                        self.insert(u);
                        self.fill();
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }

    fn best_pair(&mut self, ones: &[u32]) -> Option<(u32, u32)> {
        let mut best: Option<(u64, u32, u32)> = None;
        for (i, &u) in ones.iter().enumerate() {
            for &w in &ones[i + 1..] {
                if raw_dz(u, w) >= 2 {
                    let c = self.cost(u) + self.cost(w);
                    if best.map_or(true, |b| c < b.0) {
                        best = Some((c, u, w));
                    }
                    if !self.weighted {
                        return Some((u, w));
                    }
                }
            }
        }
        best.map(|(_, u, w)| (u, w))
    }

    /// Forces `k` outside vertices into the solution.
    fn perturb(&mut self, k: usize) {
        let size = self.in_s.len();
        for _ in 0..k {
            // Prefer the vertex that has been out longest among a few samples.
            let mut pick = None;
            for _ in 0..4 {
                let v = self.rng.gen_range(0..size) as u32;
                if self.in_s[v as usize] {
                    continue;
                }
                if pick.map_or(true, |p: u32| self.age[v as usize] < self.age[p as usize]) {
                    pick = Some(v);
                }
            }
            let Some(v) = pick else { continue };
            let hit: Vec<u32> = self.space.conflicts[v as usize]
                .iter()
                .copied()
                .filter(|&u| self.in_s[u as usize])
                .collect();
            for u in hit {
                self.remove(u);
            }
            self.insert(v);
        }
    }

    fn run(&mut self, start: &[u32], target: usize, meter: &mut Meter) -> Vec<u32> {
        self.load(start);
        self.local_search();
        let mut best = self.sol.clone();
        let mut best_key = self.key();
        let mut current = best.clone();
        let mut current_key = best_key;
        while best_key.0 < target && meter.tick() {
            self.round += 1;
            let k = if self.rng.gen_range(0..2 * self.sol.len().max(1)) == 0 { 2 + self.rng.gen_range(0..3) } else { 1 };
            self.perturb(k);
            self.local_search();
            let key = self.key();
            if key > best_key {
                best_key = key;
                best = self.sol.clone();
            }
            if key >= current_key {
                current_key = key;
                current = self.sol.clone();
            } else {
                let d = (current_key.0 - key.0.min(current_key.0)) as f64;
                let dstar = (best_key.0 - key.0.min(best_key.0)) as f64;
                let keep = 1.0 / (1.0 + d * dstar);
                if key.0 < current_key.0 && self.rng.gen::<f64>() >= keep || key.0 == current_key.0 && self.rng.gen::<f64>() < 0.5 {
                    self.load(&current);
                } else {
                    current_key = key;
                    current = self.sol.clone();
                }
            }
        }
        best.sort_unstable();
        best
    }
}
