//! Small integer helpers for group orders.

pub use num_integer::{gcd, lcm};

/// Distinct prime divisors of `n` in increasing order.
pub fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// Exponent of `p` in `n` (`n > 0`).
pub fn valuation(mut n: usize, p: usize) -> u32 {
    debug_assert!(n > 0 && p >= 2);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Largest divisor of `n` all of whose prime factors lie in `primes`.
pub fn p_part(n: usize, primes: &[usize]) -> usize {
    let mut part = 1;
    let mut rest = n;
    for &p in primes {
        if p < 2 {
            continue;
        }
        while rest % p == 0 {
            rest /= p;
            part *= p;
        }
    }
    part
}
