//! Published reference values the reproduction report is checked against.

/// Table I: `(n, lower, upper)` bounds on the largest single-error code.
pub const TABLE_I: [(usize, u64, u64); 12] = [
    (1, 1, 1),
    (2, 2, 2),
    (3, 2, 2),
    (4, 4, 4),
    (5, 6, 6),
    (6, 12, 12),
    (7, 18, 18),
    (8, 36, 36),
    (9, 62, 62),
    (10, 108, 117),
    (11, 180, 210),
    (12, 340, 410),
];

/// Table II: for each length, `(M, F)` pairs.
pub const TABLE_II: [(usize, [(u64, u64); 5]); 4] = [
    (6, [(12, 16), (11, 23), (10, 28), (9, 33), (8, 38)]),
    (7, [(18, 48), (17, 56), (16, 62), (15, 68), (14, 73)]),
    (8, [(36, 76), (35, 85), (34, 92), (33, 99), (32, 106)]),
    (9, [(62, 177), (61, 186), (60, 193), (59, 200), (58, 207)]),
];

/// Table III: `(n, M, z_0..z_n)`.
pub const TABLE_III: [(usize, u64, &[u64]); 5] = [
    (6, 12, &[1, 0, 3, 4, 3, 0, 1]),
    (7, 18, &[1, 0, 3, 5, 5, 3, 1, 0]),
    (7, 17, &[1, 0, 3, 5, 6, 1, 1, 0]),
    (8, 36, &[1, 0, 4, 8, 10, 8, 4, 0, 1]),
    (9, 62, &[1, 0, 4, 9, 17, 17, 11, 2, 1, 0]),
];

/// A Table IV entry: exact, or only claimed as a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Exact(u64),
    AtLeast(u64),
}

impl Claim {
    pub fn value(self) -> u64 {
        match self {
            Claim::Exact(v) | Claim::AtLeast(v) => v,
        }
    }
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Claim::Exact(v) => write!(f, "{}", v),
            Claim::AtLeast(v) => write!(f, ">={}", v),
        }
    }
}

/// Table IV, symmetric row: `(n, messages)`.
pub const TABLE_IV_SYMMETRIC: [(usize, u64); 8] =
    [(5, 9), (6, 16), (7, 29), (8, 52), (9, 96), (10, 177), (11, 327), (12, 607)];

/// Table IV, general row.
pub const TABLE_IV_GENERAL: [(usize, Claim); 8] = [
    (5, Claim::Exact(9)),
    (6, Claim::Exact(16)),
    (7, Claim::Exact(29)),
    (8, Claim::Exact(53)),
    (9, Claim::Exact(97)),
    (10, Claim::AtLeast(177)),
    (11, Claim::AtLeast(329)),
    (12, Claim::AtLeast(607)),
];

/// Table V: `(n, M)` for the complete-feedback strategy.
pub const TABLE_V: [(usize, u64); 9] =
    [(5, 8), (6, 16), (7, 32), (8, 32), (9, 64), (10, 128), (11, 256), (12, 512), (13, 1024)];
