//! Exact binomial arithmetic.

/// `C(n, k)` with the convention that it vanishes for `k < 0`, `k > n` or `n < 0`.
pub fn binom(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::binom;

    #[test]
    fn small_values() {
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(12, 6), 924);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(-1, 0), 0);
        assert_eq!(binom(5, -1), 0);
        assert_eq!(binom(40, 20), 137846528820);
    }
}
