//! Exact small combinatorics: Stirling numbers of the second kind,
//! binomial coefficients, and factorials, all in u128.

use crate::error::{CoreError, Result};

/// Largest n accepted by [`stirling2`]. Keeps every value (and the full
/// row sum) comfortably inside u128.
pub const STIRLING_MAX_N: usize = 30;

/// Stirling number of the second kind S(n, k): the number of ways to
/// partition n labeled items into exactly k nonempty unlabeled blocks.
pub fn stirling2(n: usize, k: usize) -> Result<u128> {
    if n > STIRLING_MAX_N {
        return Err(CoreError::Capacity(format!(
            "stirling2 n = {} exceeds limit {}",
            n, STIRLING_MAX_N
        )));
    }
    if k > n {
        return Ok(0);
    }
    if n == 0 {
        return Ok(1); // S(0,0)
    }
    if k == 0 {
        return Ok(0);
    }
    // Row-by-row recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1).
    let mut row = vec![0u128; n + 1];
    row[0] = 1; // row for n = 0
    for m in 1..=n {
        let mut next = vec![0u128; n + 1];
        for j in 1..=m {
            next[j] = (j as u128) * row[j] + row[j - 1];
        }
        row = next;
    }
    Ok(row[k])
}

/// Binomial coefficient C(n, k) in u128. Exact, but overflows when the
/// result exceeds u128 (roughly C(130, 65)); keep arguments modest or use
/// [`choose_f64`].
pub fn choose(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Binomial coefficient in f64 for arguments past the exact u128 range.
/// Interleaved multiply/divide keeps intermediates in range; relative
/// error stays at the few-ulp level.
pub fn choose_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// n! in u128; n <= 33 stays exact within u128.
pub fn factorial_u128(n: u32) -> Result<u128> {
    if n > 33 {
        return Err(CoreError::Capacity(format!("factorial {} overflows u128", n)));
    }
    let mut acc: u128 = 1;
    for i in 2..=n as u128 {
        acc *= i;
    }
    Ok(acc)
}

/// ln(n!) for probability normalizations where the exact integer would
/// overflow or lose nothing by rounding.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n as u64).map(|i| (i as f64).ln()).sum()
}
