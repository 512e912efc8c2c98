//! Binomial coefficients with the extended convention `C(a, k) = 0` whenever
//! `a < 0`, `k < 0` or `k > a`.

use num_bigint::BigUint;
use num_traits::One;

/// `C(a, k)` as an arbitrary-precision integer.
pub fn binom(a: i64, k: i64) -> BigUint {
    if a < 0 || k < 0 || k > a {
        return BigUint::default();
    }
    let k = k.min(a - k) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `C(a, k)` in machine arithmetic, `None` on overflow.
pub fn binom_u128(a: i64, k: i64) -> Option<u128> {
    if a < 0 || k < 0 || k > a {
        return Some(0);
    }
    let k = k.min(a - k) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (a - i) is divisible by (i + 1)
        acc = acc.checked_mul(a - i)? / (i + 1);
    }
    Some(acc)
}

/// Multinomial coefficient `n! / (m_1! ... m_r!)` with `n = sum(m)`.
pub fn multinomial(counts: &[usize]) -> Option<u128> {
    let mut total: i64 = 0;
    let mut acc: u128 = 1;
    for &c in counts {
        total += c as i64;
        acc = acc.checked_mul(binom_u128(total, c as i64)?)?;
    }
    Some(acc)
}
