//! Base-p digit utilities: digit expansions, digit sums, and binomial
//! coefficients modulo a prime via Lucas' theorem.

/// Base-`base` digits of `n`, least significant first. Zero has no digits.
pub fn base_digits(mut n: u64, base: u64) -> Vec<u64> {
    assert!(base >= 2, "digit base must be at least 2");
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % base);
        n /= base;
    }
    digits
}

/// Sum of the base-`base` digits of `j`.
pub fn digit_sum(j: u64, base: u64) -> u64 {
    base_digits(j, base).into_iter().sum()
}

/// `C(d, i) mod p` as the product of digit-wise binomials.
pub fn lucas_binomial(mut d: u64, mut i: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while i > 0 {
        let (dd, ii) = (d % p, i % p);
        if ii > dd {
            return 0;
        }
        acc = acc * small_binomial_mod(dd, ii, p) % p;
        d /= p;
        i /= p;
    }
    acc % p
}

/// `C(n, k) mod p` for `k <= n < p` via the multiplicative formula.
fn small_binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for t in 0..k {
        num = num * ((n - t) % p) % p;
        den = den * ((t + 1) % p) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `C(y, k) mod p` where `y` is given by its base-p digits (least significant
/// first). Digits of `y` beyond the supplied list are not consulted; the
/// caller guarantees the list covers every digit position of `k`.
pub fn lucas_binomial_digits(y_digits: &[u64], k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut k = k;
    let mut pos = 0usize;
    while k > 0 {
        let kk = k % p;
        let yy = y_digits.get(pos).copied().unwrap_or(0);
        if kk > yy {
            return 0;
        }
        acc = acc * small_binomial_mod(yy, kk, p) % p;
        k /= p;
        pos += 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
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

/// Writes `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut m = 0;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_binomial(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut acc: u128 = 1;
        for t in 0..k {
            acc = acc * (n - t) as u128 / (t + 1) as u128;
        }
        acc
    }

    #[test]
    fn lucas_examples() {
        assert_eq!(lucas_binomial(5, 2, 2), 0);
        assert_eq!(lucas_binomial(7, 3, 2), 1);
        assert_eq!(lucas_binomial(3, 5, 7), 0);
    }

    #[test]
    fn lucas_matches_integer_binomials() {
        for p in [2, 3, 5] {
            for d in 0..=64 {
                for i in 0..=64 {
                    let expected = (exact_binomial(d, i) % p as u128) as u64;
                    assert_eq!(lucas_binomial(d, i, p), expected, "C({d},{i}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum(7, 2), 3);
        assert_eq!(digit_sum(1024, 2), 1);
        assert_eq!(digit_sum(0, 3), 0);
        for p in [2, 3, 5, 7] {
            for j in 0..2000 {
                assert_eq!(digit_sum(p * j, p), digit_sum(j, p));
            }
        }
    }

    #[test]
    fn digit_binomial_agrees_with_plain_lucas() {
        for p in [2u64, 3, 5] {
            for y in 0..200u64 {
                let digits = base_digits(y, p);
                for k in 0..=y {
                    assert_eq!(lucas_binomial_digits(&digits, k, p), lucas_binomial(y, k, p));
                }
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
