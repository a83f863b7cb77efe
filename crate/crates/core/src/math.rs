//! Small integer helpers shared across modules.

use num_bigint::BigUint;
use num_traits::One;

/// `n!` as a `u64`, or `None` past `20!`.
pub fn factorial_u64(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, i| acc.checked_mul(i))
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// Binomial coefficient; `None` on overflow.
pub fn binomial_u64(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= (n - i) as u64;
        acc /= (i + 1) as u64;
    }
    acc
}

/// `(n-1)(n-3)...3*1` for even `n`; the number of fixed-point-free involutions.
pub fn odd_double_factorial_below(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    let mut m = n.saturating_sub(1);
    while m > 1 {
        acc *= m as u64;
        m -= 2;
    }
    acc
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n = p^e` with `p` prime, if possible.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

pub fn is_odd_prime_power(n: u64) -> bool {
    matches!(prime_power(n), Some((p, _)) if p != 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn factorials() {
        assert_eq!(factorial_u64(0), Some(1));
        assert_eq!(factorial_u64(7), Some(5040));
        assert_eq!(factorial_u64(20), Some(2_432_902_008_176_640_000));
        assert_eq!(factorial_u64(21), None);
        assert_eq!(factorial(21).to_string(), "51090942171709440000");
    }

    #[test]
    fn binomials_agree() {
        for n in 0..30 {
            for k in 0..=n + 1 {
                assert_eq!(BigUint::from(binomial_u64(n, k).unwrap()), binomial(n, k));
            }
        }
        assert_eq!(binomial_u64(351, 2), Some(61_425));
    }

    #[test]
    fn double_factorial() {
        assert_eq!(odd_double_factorial_below(2), BigUint::from(1u32));
        assert_eq!(odd_double_factorial_below(4), BigUint::from(3u32));
        assert_eq!(odd_double_factorial_below(10), BigUint::from(945u32));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert!(is_odd_prime_power(25));
        assert!(!is_odd_prime_power(8));
        assert!(!is_odd_prime_power(6));
        assert!(!is_odd_prime_power(1));
        assert!(is_prime(7) && !is_prime(9) && !is_prime(1));
    }
}
