//! Small-integer number theory used throughout.

use num_integer::Integer;

pub fn gcd(a: usize, b: usize) -> usize {
    a.gcd(&b)
}

pub fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs, primes ascending.
pub fn factor(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: usize) -> Vec<usize> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

pub fn divisors(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

pub fn euler_phi(n: usize) -> usize {
    factor(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Möbius function.
pub fn mobius(n: usize) -> i32 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = (result as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    result
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of `a` modulo `m` (which must be coprime to `a`).
pub fn mult_order(a: usize, m: usize) -> usize {
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
        assert!(k <= m, "{a} is not a unit mod {m}");
    }
    k
}

/// `(a, m)` with `n = p^a * m` and `p ∤ m`.
pub fn split_prime_power(mut n: usize, p: usize) -> (u32, usize) {
    let mut a = 0;
    while n % p == 0 {
        n /= p;
        a += 1;
    }
    (a, n)
}

pub fn is_power_of(n: usize, p: usize) -> bool {
    split_prime_power(n, p).1 == 1
}

/// Exact integer log: `Some(k)` with `p^k = n`.
pub fn log_exact(n: usize, p: usize) -> Option<u32> {
    let (a, rest) = split_prime_power(n, p);
    (rest == 1).then_some(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(euler_phi(63), 36);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mult_order(4, 9), 3);
        assert_eq!(mult_order(3, 7), 6);
        assert_eq!(inv_mod(2, 7), Some(4));
        assert_eq!(split_prime_power(63, 3), (2, 7));
        assert_eq!(factor(189), vec![(3, 3), (7, 1)]);
        assert!(is_prime(37) && !is_prime(39));
    }
}
