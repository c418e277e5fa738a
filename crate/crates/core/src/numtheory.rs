//! Small integer arithmetic: gcd, modular powers, factorization.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % modulus as u128) as u64;
        }
        base = (base as u128 * base as u128 % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Reduces a possibly negative integer into `0..m`.
pub fn reduce(value: i64, m: u64) -> u64 {
    value.rem_euclid(m as i64) as u64
}

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

/// `Some((p, e))` when `n = p^e` with `p` prime and `e >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

/// Set of prime divisors, `π(n)`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Total number of prime factors counted with multiplicity, `Ω(n)`.
pub fn big_omega(n: u64) -> u32 {
    factorize(n).into_iter().map(|(_, e)| e).sum()
}

/// Multiplicative order of `u` modulo `m`; `None` when `u` is not a unit.
pub fn multiplicative_order(u: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(u % m, m) != 1 {
        return None;
    }
    let mut x = u % m;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * u as u128 % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).collect();
    let upper: Vec<u64> = out.iter().rev().map(|d| n / d).filter(|&q| q * q != n).collect();
    out.extend(upper);
    out
}

/// Smallest-prime-factor sieve up to `limit` inclusive.
pub fn spf_sieve(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Factorization via a precomputed smallest-prime-factor table.
pub fn factorize_with(spf: &[u32], mut n: usize) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        out.push((p as u64, e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorizations() {
        assert_eq!(factorize(105), vec![(3, 1), (5, 1), (7, 1)]);
        assert_eq!(factorize(81), vec![(3, 4)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(big_omega(81), 4);
        assert_eq!(prime_power(1331), Some((11, 3)));
        assert_eq!(prime_power(63), None);
        assert_eq!(divisors(105).len(), 8);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn orders_and_reduction() {
        assert_eq!(multiplicative_order(8, 9), Some(2));
        assert_eq!(multiplicative_order(4, 15), Some(2));
        assert_eq!(multiplicative_order(3, 9), None);
        assert_eq!(reduce(-1, 81), 80);
        assert_eq!(pow_mod(3, 4, 10), 1);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let spf = spf_sieve(5000);
        for n in 2..5000 {
            assert_eq!(factorize_with(&spf, n), factorize(n as u64));
        }
    }
}
