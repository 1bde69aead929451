//! Bernoulli numbers, divisor sums and zeta values used by the q-expansion.
//!
//! Everything that can overflow binary64 for large weights is returned as a
//! natural logarithm of a magnitude plus a sign.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Highest index computed by the exact rational recurrence.
pub const EXACT_LIMIT: u32 = 64;

fn exact_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let limit = EXACT_LIMIT as usize;
        // binomial rows C(m+1, j) are built incrementally
        let mut b: Vec<BigRational> = Vec::with_capacity(limit + 1);
        b.push(BigRational::one());
        let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
        for m in 1..=limit {
            // row currently holds C(m, .); advance to C(m+1, .)
            let mut next = vec![BigInt::one(); m + 2];
            for j in 1..=m {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
            let mut acc = BigRational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += BigRational::from_integer(row[j].clone()) * bj;
            }
            let bm = -acc / BigRational::from_integer(BigInt::from(m as u64 + 1));
            b.push(bm);
        }
        b
    })
}

/// Exact Bernoulli number `B_n` for `n <= 64` (convention `B_1 = -1/2`).
pub fn bernoulli_exact(n: u32) -> Option<BigRational> {
    exact_table().get(n as usize).cloned()
}

/// `ζ(s)` for real `s > 1` by direct summation of 64 terms plus the first
/// Euler-Maclaurin corrections for the tail.
pub fn zeta(s: f64) -> f64 {
    let n = 64f64;
    let head: f64 = (1..=64u32).map(|i| (i as f64).powf(-s)).sum();
    head + n.powf(1.0 - s) / (s - 1.0) - 0.5 * n.powf(-s) + s / 12.0 * n.powf(-s - 1.0)
}

/// An upper bound for `ζ(s)`, `s > 1`.
pub fn zeta_upper(s: f64) -> f64 {
    let head: f64 = (1..=64u32).map(|n| (n as f64).powf(-s)).sum();
    head + 64f64.powf(1.0 - s) / (s - 1.0)
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `(ln |B_k|, sign of B_k)` for even `k >= 2`.
///
/// Exact recurrence up to `k = 64`, then `|B_k| = 2 k! ζ(k) / (2π)^k`.
pub fn ln_abs_bernoulli(k: u32) -> (f64, f64) {
    debug_assert!(k >= 2 && k % 2 == 0);
    let sign = if (k / 2) % 2 == 1 { 1.0 } else { -1.0 };
    if k <= EXACT_LIMIT {
        let b = bernoulli_exact(k).expect("within table");
        let mag = b.abs().to_f64().expect("finite for k <= 64");
        return (mag.ln(), sign);
    }
    let ln_mag = std::f64::consts::LN_2 + ln_factorial(k) + zeta(k as f64).ln()
        - k as f64 * (2.0 * std::f64::consts::PI).ln();
    (ln_mag, sign)
}

/// `ln σ_{p}(n)` for `n >= 1`, computed as `p ln n + ln Σ_{d|n} d^{-p}` so
/// that no intermediate overflows.
pub fn ln_divisor_sum(n: u64, p: u32) -> f64 {
    let p = p as f64;
    let mut small = 0.0;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small += (d as f64).powf(-p);
            let e = n / d;
            if e != d {
                small += (e as f64).powf(-p);
            }
        }
        d += 1;
    }
    p * (n as f64).ln() + small.ln()
}
