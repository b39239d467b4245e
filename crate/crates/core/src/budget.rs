use std::time::{Duration, Instant};

/// Search budget: a node count (reproducible) and/or a wall-clock limit.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget { max_nodes: None, deadline: None }
    }

    pub fn nodes(n: u64) -> Budget {
        Budget { max_nodes: Some(n), deadline: None }
    }

    pub fn time(d: Duration) -> Budget {
        Budget { max_nodes: None, deadline: Some(Instant::now() + d) }
    }

    pub fn with_time(mut self, d: Duration) -> Budget {
        self.deadline = Some(Instant::now() + d);
        self
    }

    pub fn meter(&self) -> Meter {
        Meter { budget: *self, used: 0, exhausted: false }
    }
}

/// Tracks consumption of a [`Budget`]. The clock is sampled every 4096 ticks.
#[derive(Clone, Debug)]
pub struct Meter {
    budget: Budget,
    used: u64,
    exhausted: bool,
}

impl Meter {
    /// Counts one node; returns `false` once the budget is gone.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.used += 1;
        if let Some(max) = self.budget.max_nodes {
            if self.used > max {
                self.exhausted = true;
                return false;
            }
        }
        if self.used & 0xfff == 0 {
            if let Some(d) = self.budget.deadline {
                if Instant::now() >= d {
                    self.exhausted = true;
                    return false;
                }
            }
        }
        true
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
