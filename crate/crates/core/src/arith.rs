//! Small integer helpers shared by the other modules.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Representative of `a mod b` in the symmetric range `(-b/2, b/2]`.
pub fn sym_mod(a: &BigInt, b: &BigInt) -> BigInt {
    let mut r = a.mod_floor(b);
    if &r * 2 > *b {
        r -= b;
    }
    r
}

/// Symmetric representative of `a mod p` for a machine prime.
pub fn sym_mod_u64(a: u64, p: u64) -> i64 {
    if 2 * a > p {
        a as i64 - p as i64
    } else {
        a as i64
    }
}

/// Reduction of a big integer into `[0, p)`.
pub fn mod_u64(a: &BigInt, p: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod_u64(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut k = n.max(2);
    while !is_prime_u64(k) {
        k += 1;
    }
    k
}

/// Ascending primes starting at the first prime `>= start`.
pub fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    let mut cur = start.max(2);
    std::iter::from_fn(move || {
        let p = next_prime(cur);
        cur = p + 1;
        Some(p)
    })
}

/// Natural logarithm of a positive big integer, from its bit length and top 64 bits.
pub fn ln_bigint(n: &BigInt) -> f64 {
    assert!(n.is_positive(), "logarithm of non-positive integer");
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    (top.to_u64().unwrap() as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of the absolute value of a nonzero rational.
pub fn ln_abs_rational(q: &BigRational) -> f64 {
    ln_bigint(&q.numer().abs()) - ln_bigint(&q.denom().abs())
}

/// Least common multiple of a list of positive integers (1 for an empty list).
pub fn lcm_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

/// Greatest common divisor of a list of integers (0 for an empty or all-zero list).
pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for x in xs {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Sign of the first nonzero element, `Sign::NoSign` if all are zero.
pub fn first_nonzero_sign(xs: &[BigInt]) -> Sign {
    xs.iter().map(|x| x.sign()).find(|s| *s != Sign::NoSign).unwrap_or(Sign::NoSign)
}

/// Value of a rational modulo `m`, if its denominator is invertible.
pub fn rational_mod(q: &BigRational, m: &BigInt) -> Option<BigInt> {
    let inv = inv_mod(q.denom(), m)?;
    Some((q.numer() * inv).mod_floor(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_range() {
        let b = BigInt::from(10);
        assert_eq!(sym_mod(&BigInt::from(5), &b), BigInt::from(5));
        assert_eq!(sym_mod(&BigInt::from(6), &b), BigInt::from(-4));
        assert_eq!(sym_mod(&BigInt::from(-5), &b), BigInt::from(5));
        assert_eq!(sym_mod_u64(125, 251), 125);
        assert_eq!(sym_mod_u64(126, 251), -125);
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = primes_from(29).take(13).collect();
        assert_eq!(ps, vec![29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79]);
        assert!(is_prime_u64(65537));
        assert!(!is_prime_u64(65535));
        assert!(is_prime_u64(18446744073709551557));
    }

    #[test]
    fn logs_of_large_integers() {
        let n = BigInt::from(3).pow(200u32);
        let l = ln_bigint(&n);
        assert!((l - 200.0 * 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(inv_mod(&BigInt::from(3), &BigInt::from(7)), Some(BigInt::from(5)));
        assert_eq!(inv_mod(&BigInt::from(2), &BigInt::from(4)), None);
        assert_eq!(inv_mod_u64(3, 251) * 3 % 251, 1);
    }
}
