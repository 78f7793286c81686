//! Factorisation of polynomials over Q.
//!
//! Squarefree parts are made primitive in Z[X], factored modulo a good
//! prime (distinct-degree then Cantor-Zassenhaus), Hensel-lifted past the
//! Mignotte bound, and recombined by trial division over subsets. Degrees
//! stay small, so the exponential recombination is acceptable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integer::primes_up_to;
use super::poly::{poly_gcd, Polynomial};

/// Irreducible monic factors of `p` with multiplicities.
///
/// The product of the factors (with multiplicity) times the leading
/// coefficient of `p` equals `p`. Output is sorted by degree, then by
/// coefficients. Panics on the zero polynomial.
pub fn poly_factor(p: &Polynomial) -> Vec<(Polynomial, usize)> {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(&p.monic()) {
        for f in factor_squarefree(&part) {
            out.push((f, mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| {
                let key = |p: &Polynomial| -> Vec<_> {
                    p.coeffs().iter().map(|c| (c.abs(), c.is_positive())).collect()
                };
                key(a).cmp(&key(b))
            })
    });
    out
}

/// True when `p` has positive degree and no proper factorisation over Q.
pub fn is_irreducible(p: &Polynomial) -> bool {
    match p.degree() {
        None | Some(0) => false,
        Some(_) => {
            let f = poly_factor(p);
            f.len() == 1 && f[0].1 == 1
        }
    }
}

/// Yun's algorithm on a monic polynomial: pairs `(A_i, i)` with
/// `p = prod A_i^i`, each `A_i` squarefree and monic, trivial parts dropped.
fn squarefree_decomposition(p: &Polynomial) -> Vec<(Polynomial, usize)> {
    let mut out = Vec::new();
    if p.degree() == Some(0) {
        return out;
    }
    let dp = p.derivative();
    let a0 = poly_gcd(p, &dp);
    let mut b = p.div_exact(&a0).unwrap();
    let mut c = dp.div_exact(&a0).unwrap();
    let mut d = &c - &b.derivative();
    let mut i = 1;
    loop {
        let a = poly_gcd(&b, &d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).unwrap();
        if b.degree() == Some(0) {
            break;
        }
        c = d.div_exact(&a).unwrap();
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

fn factor_squarefree(p: &Polynomial) -> Vec<Polynomial> {
    let deg = p.degree().unwrap();
    if deg <= 1 {
        return vec![p.monic()];
    }
    let f = p.primitive_integer();
    // Pull out the factor X directly; keeps the recombination honest at 0.
    if f[0].is_zero() {
        let rest = Polynomial::from_bigints(&f[1..]);
        let mut out = vec![Polynomial::x()];
        out.extend(factor_squarefree(&rest));
        return out;
    }
    zassenhaus(&f)
        .into_iter()
        .map(|g| Polynomial::from_bigints(&g).monic())
        .collect()
}

// ---------------------------------------------------------------------------
// Arithmetic in F_p[X], coefficients as u64 lowest first, normalised.

type ModPoly = Vec<u64>;

fn trim(mut a: ModPoly) -> ModPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod_u64(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powmod_u64(a, p - 2, p)
}

fn mp_sub(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect())
}

fn mp_mul(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn mp_divrem(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let db = b.len() - 1;
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (db..r.len()).rev() {
        let c = mulmod(r[k], inv, p);
        if c == 0 {
            continue;
        }
        q[k - db] = c;
        for (j, &y) in b.iter().enumerate() {
            r[k - db + j] = (r[k - db + j] + p - mulmod(c, y, p)) % p;
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn mp_rem(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    mp_divrem(a, b, p).1
}

fn mp_monic(a: &ModPoly, p: u64) -> ModPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|&x| mulmod(x, inv, p)).collect()
        }
    }
}

fn mp_gcd(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = mp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    mp_monic(&a, p)
}

/// Extended gcd in F_p[X]: `(g, s, t)` with `s a + t b = g` monic.
fn mp_xgcd(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (ModPoly, ModPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (ModPoly, ModPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = mp_divrem(&r0, &r1, p);
        let s2 = mp_sub(&s0, &mp_mul(&q, &s1, p), p);
        let t2 = mp_sub(&t0, &mp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &ModPoly| trim(v.iter().map(|&x| mulmod(x, inv, p)).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn mp_powmod(base: &ModPoly, mut e: u128, m: &ModPoly, p: u64) -> ModPoly {
    let mut acc: ModPoly = mp_rem(&vec![1], m, p);
    let mut b = mp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mp_rem(&mp_mul(&acc, &b, p), m, p);
        }
        b = mp_rem(&mp_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

fn mp_derivative(a: &ModPoly, p: u64) -> ModPoly {
    trim(a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &x)| mulmod(x, k as u64 % p, p))
        .collect())
}

fn reduce_mod_p(f: &[BigInt], p: u64) -> ModPoly {
    let bp = BigInt::from(p);
    trim(f.iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect())
}

/// Distinct-degree factorisation of a monic squarefree polynomial.
fn distinct_degree(f: &ModPoly, p: u64) -> Vec<(ModPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x: ModPoly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            let deg = rest.len() - 1;
            out.push((rest.clone(), deg));
            break;
        }
        h = mp_powmod(&h, p as u128, &rest, p);
        let g = mp_gcd(&rest, &mp_sub(&h, &x, p), p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            rest = mp_divrem(&rest, &g, p).0;
            h = mp_rem(&h, &rest, p);
        }
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of degree-`d` irreducibles (odd p).
fn equal_degree(f: &ModPoly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e = ((p as u128).pow(d as u32) - 1) / 2;
    loop {
        let a: ModPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = mp_sub(&mp_powmod(&a, e, f, p), &vec![1], p);
        let g = mp_gcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = mp_divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&mp_monic(&h, p), d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &ModPoly, p: u64) -> Vec<ModPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, &mut rng));
    }
    out
}

// ---------------------------------------------------------------------------
// Lifting and recombination over Z.

fn norm_inf(f: &[BigInt]) -> BigInt {
    f.iter().map(|c| c.abs()).max().unwrap_or_default()
}

fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let lc = f[n].clone();
    // good prime: odd, does not divide lc, f squarefree mod p; among the first
    // few candidates pick the one with the fewest modular factors
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    for p in primes_up_to(2000).into_iter().skip(1) {
        if (&lc % p).is_zero() {
            continue;
        }
        let fp = mp_monic(&reduce_mod_p(f, p), p);
        if mp_gcd(&fp, &mp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = factor_mod_p(&fp, p);
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, modular) = best.expect("no good prime below 2000");
    // Mignotte-style bound on coefficients of factors, scaled by lc.
    let bound = BigInt::from(2).pow(n as u32)
        * norm_inf(f)
        * BigInt::from(((n + 1) as f64).sqrt().ceil() as u64)
        * lc.abs()
        * 2;
    let bp = BigInt::from(p);
    let mut modulus = bp.clone();
    let mut k = 1u32;
    while modulus <= bound {
        modulus *= &bp;
        k += 1;
    }
    let lifted = hensel_lift(f, &modular, p, k);
    recombine(f, lifted, &modulus)
}

/// Multifactor linear Hensel lifting of `f = lc * prod g_i (mod p)` to mod `p^k`.
fn hensel_lift(f: &[BigInt], gs: &[ModPoly], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let r = gs.len();
    let lc = f.last().unwrap().clone();
    let bp = BigInt::from(p);
    let lc_inv_p = inv_mod(lc.mod_floor(&bp).to_u64().unwrap(), p);
    // partial fraction coefficients: sum s_i * prod_{j != i} g_j = 1 (mod p)
    let cofactors: Vec<ModPoly> = (0..r)
        .map(|i| {
            (0..r)
                .filter(|&j| j != i)
                .fold(vec![1], |acc, j| mp_mul(&acc, &gs[j], p))
        })
        .collect();
    let mut s: Vec<ModPoly> = Vec::with_capacity(r);
    {
        // successive xgcd: maintain combination for product so far
        // Solve for each i: s_i = (prod_{j != i} g_j)^{-1} mod g_i
        for i in 0..r {
            let (_, inv, _) = mp_xgcd(&mp_rem(&cofactors[i], &gs[i], p), &gs[i], p);
            s.push(inv);
        }
    }
    let mut lifted: Vec<Vec<BigInt>> = gs
        .iter()
        .map(|g| g.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let mut pk = bp.clone();
    for _ in 1..k {
        // e = (f - lc * prod g_i) / p^j mod p
        let prod = lifted.iter().fold(vec![lc.clone()], |acc, g| zmul(&acc, g));
        let diff: Vec<BigInt> = (0..f.len().max(prod.len()))
            .map(|i| f.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default())
            .collect();
        let e: ModPoly = trim(
            diff.iter()
                .map(|c| {
                    debug_assert!((c % &pk).is_zero());
                    (c / &pk).mod_floor(&bp).to_u64().unwrap()
                })
                .collect(),
        );
        let e = trim(e.iter().map(|&c| mulmod(c, lc_inv_p, p)).collect());
        for i in 0..r {
            let corr = mp_rem(&mp_mul(&e, &s[i], p), &gs[i], p);
            for (j, c) in corr.iter().enumerate() {
                if j >= lifted[i].len() {
                    lifted[i].resize(j + 1, BigInt::zero());
                }
                lifted[i][j] += &pk * BigInt::from(*c);
            }
        }
        pk *= &bp;
    }
    lifted
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m { r - m } else { r }
}

fn primitive_part(g: &[BigInt]) -> Vec<BigInt> {
    let c = g.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if g.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    g.iter().map(|x| x / &c * &sign).collect()
}

/// Exact division in Z[X]; `None` unless `g | f`.
fn zdiv(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let dg = g.len() - 1;
    let mut r = f.to_vec();
    if r.len() < g.len() {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - dg];
    let lg = g.last().unwrap();
    for k in (dg..r.len()).rev() {
        let (c, rem) = r[k].div_rem(lg);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, y) in g.iter().enumerate() {
            r[k - dg + j] -= &c * y;
        }
        q[k - dg] = c;
    }
    r.iter().all(Zero::is_zero).then_some(q)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn recombine(f: &[BigInt], mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut f = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in subsets(lifted.len(), size) {
            let lc = f.last().unwrap().clone();
            let cand = subset
                .iter()
                .fold(vec![lc], |acc, &i| zmul(&acc, &lifted[i]))
                .iter()
                .map(|c| symmetric_mod(c, modulus))
                .collect::<Vec<_>>();
            let cand = primitive_part(&trim_z(cand));
            if let Some(q) = zdiv(&f, &cand) {
                out.push(cand);
                f = q;
                let mut keep = Vec::new();
                for (i, g) in lifted.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g);
                    }
                }
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.len() > 1 {
        out.push(primitive_part(&f));
    }
    out
}

fn trim_z(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}
