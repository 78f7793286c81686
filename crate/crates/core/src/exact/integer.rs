//! Integer number theory: primality, factorisation, square roots, symbols.
//!
//! Factorisation is trial division followed by Brent's variant of Pollard
//! rho. Inputs are expected to be desk-scale (norms of small algebraic
//! numbers), so no sieve-based method is provided.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const SMALL_PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
const TRIAL_LIMIT: u64 = 10_000;

/// Miller-Rabin with the first fifteen prime bases. Deterministic below
/// 3.3 * 10^24, a probable-prime test above.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &SMALL_PRIMES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigInt::from(n))
}

/// Prime factorisation of `|n|` as sorted `(prime, exponent)` pairs.
/// Zero and units have an empty factorisation.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut out: BTreeMap<BigInt, u32> = BTreeMap::new();
    let mut n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        while (&n % &bp).is_zero() {
            n /= &bp;
            *out.entry(bp.clone()).or_default() += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *out.entry(m).or_default() += 1;
            continue;
        }
        if let Some(r) = perfect_square_root(&m) {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let f = pollard_brent(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    out.into_iter().collect()
}

/// Distinct primes dividing `|n|`.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

fn perfect_square_root(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// A nontrivial factor of the composite `n`.
fn pollard_brent(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let one = BigInt::one();
    for c in 1u64.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut y, m) = (BigInt::from(2), 64usize);
        let (mut g, mut r, mut q) = (one.clone(), 1usize, one.clone());
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// Signed valuation of a nonzero rational.
pub fn valuation_rational(q: &crate::exact::Rational, p: &BigInt) -> i64 {
    valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64
}

/// `(s, f)` with `n = s * f^2` and `s` squarefree (sign carried by `s`).
pub fn squarefree_decomposition(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let mut s = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut f = BigInt::one();
    for (p, e) in factor(n) {
        if e % 2 == 1 {
            s *= &p;
        }
        f *= p.pow(e / 2);
    }
    (s, f)
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    n.sqrt()
}

/// Kronecker symbol `(a / n)` for `n > 0`.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    assert!(n.is_positive());
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result = 1;
    let v = n.trailing_zeros().unwrap_or(0);
    if v > 0 {
        if a.is_even() {
            return 0;
        }
        let a8 = a.mod_floor(&BigInt::from(8)).to_u32().unwrap();
        if v % 2 == 1 && (a8 == 3 || a8 == 5) {
            result = -result;
        }
        n >>= v;
    }
    // Jacobi symbol for odd n.
    a = a.mod_floor(&n);
    while !a.is_zero() {
        let t = a.trailing_zeros().unwrap_or(0);
        if t > 0 {
            let n8 = (&n % 8u32).to_u32().unwrap();
            if t % 2 == 1 && (n8 == 3 || n8 == 5) {
                result = -result;
            }
            a >>= t;
        }
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// A square root of `a` modulo the odd prime `p`, if one exists.
pub fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if p == &BigInt::from(2) {
        return Some(a);
    }
    if kronecker(&a, p) != 1 {
        return None;
    }
    // Tonelli-Shanks.
    let one = BigInt::one();
    let pm1 = p - &one;
    let s = pm1.trailing_zeros().unwrap_or(0);
    let q = &pm1 >> s;
    let mut z = BigInt::from(2);
    while kronecker(&z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0;
        let mut tt = t.clone();
        while !tt.is_one() {
            tt = (&tt * &tt) % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (t * &c) % p;
        r = (r * b) % p;
    }
    Some(r)
}

/// Primes up to `bound` inclusive.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Natural logarithm of `|n|` for a nonzero big integer, accurate to f64.
pub fn ln_abs(n: &BigInt) -> f64 {
    let (_, mag) = (n.sign(), n.magnitude());
    ln_biguint(mag)
}

fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn sign_of(n: &BigInt) -> i32 {
    match n.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..100).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, primes_up_to(99));
        assert!(is_prime(&"170141183460469231731687303715884105727".parse().unwrap()));
        assert!(!is_prime(&b(561)));
    }

    #[test]
    fn factorisation_reassembles() {
        for n in [1i64, 2, 12, 360, 999_983 * 1_000_003, -84, 2_147_483_647 * 97] {
            let f = factor(&b(n));
            let prod = f.iter().fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(prod, b(n).abs());
            assert!(f.iter().all(|(p, _)| is_prime(p)));
        }
        let big: BigInt = "1000000016000000063".parse().unwrap(); // 1000000007 * 1000000009
        let f = factor(&big);
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn kronecker_symbols() {
        assert_eq!(kronecker(&b(2), &b(7)), 1);
        assert_eq!(kronecker(&b(3), &b(7)), -1);
        assert_eq!(kronecker(&b(-20), &b(3)), 1);
        assert_eq!(kronecker(&b(5), &b(2)), -1);
        assert_eq!(kronecker(&b(17), &b(2)), 1);
        assert_eq!(kronecker(&b(8), &b(2)), 0);
        for p in primes_up_to(60).into_iter().skip(1) {
            for a in 1..p as i64 {
                let euler = b(a).modpow(&b((p as i64 - 1) / 2), &b(p as i64));
                let expected = if euler.is_one() { 1 } else { -1 };
                assert_eq!(kronecker(&b(a), &b(p as i64)), expected);
            }
        }
    }

    #[test]
    fn square_roots_mod_p() {
        for p in [3i64, 5, 13, 17, 41, 97] {
            for a in 0..p {
                if let Some(r) = sqrt_mod_prime(&b(a), &b(p)) {
                    assert_eq!((&r * &r) % b(p), b(a));
                }
            }
        }
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_decomposition(&b(-72)), (b(-2), b(6)));
        assert_eq!(squarefree_decomposition(&b(5)), (b(5), b(1)));
    }
}
