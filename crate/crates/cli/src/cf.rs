//! Size of the complete-feedback strategy used for comparison.

/// Number of tests `n = m - 1 + ceil(log2(m + 3))` needed for `M = 2^m`
/// messages with complete feedback. Panics if `m == 0` or `m >= 64`.
pub fn cf_feedback_size(m: u32) -> (usize, u64) {
    assert!((1..64).contains(&m), "message exponent must be in 1..64");
    let log = (m as u64 + 3).next_power_of_two().trailing_zeros();
    ((m - 1 + log) as usize, 1 << m)
}

/// Largest `2^m` whose strategy fits in `n` tests.
pub fn cf_best_size(n: usize) -> Option<u64> {
    (1..64).map(cf_feedback_size).take_while(|&(k, _)| k <= n).map(|(_, size)| size).last()
}
