//! Small integer helpers for group orders.

pub use num_integer::{gcd, lcm};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Exponent of `p` in `n` (`n > 0`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Largest power of `p` dividing `n`.
pub fn p_part(n: u64, p: u64) -> u64 {
    p.pow(valuation(n, p))
}

/// `n` with every factor of `p` removed.
pub fn p_prime_part(n: u64, p: u64) -> u64 {
    n / p_part(n, p)
}

pub fn is_power_of(n: u64, p: u64) -> bool {
    n >= 1 && p_part(n, p) == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_round_trips() {
        for n in 1..500u64 {
            let f = factorize(n);
            assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn parts() {
        assert_eq!(p_part(72, 2), 8);
        assert_eq!(p_prime_part(72, 3), 8);
        assert_eq!(valuation(81, 3), 4);
        assert!(is_power_of(125, 5));
        assert!(!is_power_of(12, 2));
    }
}
