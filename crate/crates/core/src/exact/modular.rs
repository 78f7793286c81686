//! Nonsingular rational systems by p-adic lifting.
//!
//! The system is scaled to integers, inverted once modulo a word-size
//! prime, lifted digit by digit past the Hadamard bound, and recovered by
//! rational reconstruction. Every answer is checked exactly before it is
//! returned; callers fall back to elimination on `None`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::integer::is_prime_u64;
use super::matrix::RationalMatrix;
use super::rational::{common_denominator, Rational};

const PRIME_ATTEMPTS: usize = 3;

fn word_primes() -> impl Iterator<Item = u64> {
    (0..).map(|k| (1u64 << 31) - 1 - 2 * k).filter(|&p| is_prime_u64(p))
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut e, mut b) = (1u64, p - 2, a % p);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Inverse of an integer matrix modulo `p`, or `None` when singular.
fn inverse_mod_p(a: &[Vec<BigInt>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<u64> = row.iter().map(|x| reduce(x, p)).collect();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        let inv = inv_mod(m[col][col], p);
        for x in m[col].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mulmod(f, *y, p)) % p;
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `n/d` with `n/d = a (mod m)` and `|n|, d <= sqrt(m/2)`, if any.
fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Rational::new(r1, s1))
}

fn log2_norm(row: &[BigInt]) -> f64 {
    let s: BigInt = row.iter().map(|x| x * x).sum();
    if s.is_zero() {
        0.0
    } else {
        0.5 * (s.bits() as f64)
    }
}

/// Solutions `x` of `m x = b` for each right-hand side, when `m` is square
/// and nonsingular modulo one of a few word-size primes.
pub fn solve_nonsingular(m: &RationalMatrix, rhs: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.rows;
    if n != m.cols || rhs.iter().any(|b| b.len() != n) {
        return None;
    }
    if n == 0 {
        return Some(rhs.iter().map(|_| Vec::new()).collect());
    }
    // scale each row (of the augmented system) to integers
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut bs: Vec<Vec<BigInt>> = vec![Vec::with_capacity(n); rhs.len()];
    for i in 0..n {
        let row = m.row(i);
        let l = common_denominator(row.iter().chain(rhs.iter().map(|b| &b[i])));
        a.push(row.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect());
        for (k, b) in rhs.iter().enumerate() {
            bs[k].push((&b[i] * Rational::from_integer(l.clone())).to_integer());
        }
    }
    let (p, c) = word_primes()
        .take(PRIME_ATTEMPTS)
        .find_map(|p| inverse_mod_p(&a, p).map(|c| (p, c)))?;
    let mut out = Vec::with_capacity(rhs.len());
    for b in bs {
        // Hadamard bound for determinants of the augmented matrix
        let log_h: f64 = a
            .iter()
            .zip(&b)
            .map(|(row, bi)| {
                let mut r = row.clone();
                r.push(bi.clone());
                log2_norm(&r) + 1.0
            })
            .sum();
        let needed_bits = 2.0 * log_h + 4.0;
        let bp = BigInt::from(p);
        let mut x = vec![BigInt::zero(); n];
        let mut r = b.clone();
        let mut pk = BigInt::one();
        while (pk.bits() as f64) < needed_bits {
            let rp: Vec<u64> = r.iter().map(|v| reduce(v, p)).collect();
            let y: Vec<u64> = c
                .iter()
                .map(|row| row.iter().zip(&rp).fold(0u64, |acc, (u, v)| (acc + mulmod(*u, *v, p)) % p))
                .collect();
            for i in 0..n {
                x[i] += &pk * y[i];
            }
            for (i, ri) in r.iter_mut().enumerate() {
                let ay: BigInt = a[i].iter().zip(&y).map(|(aij, &yj)| aij * yj).sum();
                *ri -= ay;
                debug_assert!((&*ri % &bp).is_zero());
                *ri /= &bp;
            }
            pk *= &bp;
        }
        let sol: Vec<Rational> = x.iter().map(|xi| rational_reconstruction(xi, &pk)).collect::<Option<_>>()?;
        // exact check of m x = b
        for i in 0..n {
            let lhs: Rational = m.row(i).iter().zip(&sol).map(|(u, v)| u * v).sum();
            if lhs != rhs[out.len()][i] {
                return None;
            }
        }
        out.push(sol);
    }
    Some(out)
}

/// True when `m` is square and nonsingular modulo some word-size prime
/// (hence nonsingular over `Q`). `false` is inconclusive.
pub fn nonsingular_mod_p(m: &RationalMatrix) -> bool {
    if m.rows != m.cols {
        return false;
    }
    let den = common_denominator(m.entries.iter());
    let a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| m.row(i).iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    word_primes().take(PRIME_ATTEMPTS).any(|p| inverse_mod_p(&a, p).is_some())
}
