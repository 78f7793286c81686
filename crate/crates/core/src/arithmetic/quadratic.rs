//! Quadratic fields `Q(sqrt(s))`: integral elements, ideals in Hermite
//! form, binary quadratic forms, class groups and unit groups.
//!
//! Elements are written in the integral basis `(1, w)` with
//! `w = sqrt(s)` or `w = (1 + sqrt(s)) / 2`, so that `w^2 = t w + n`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etale::FieldElement;
use crate::exact::integer::{kronecker, ln_abs, primes_up_to, sqrt_mod_prime, squarefree_decomposition, valuation};
use crate::exact::rational::{common_denominator, serde_bigint};
use crate::exact::snf::{integer_kernel, lattice_basis, smith_normal_form, IntMatrix};
use crate::exact::{Rational, RationalMatrix};

/// How a rational prime decomposes in a quadratic field. The two primes
/// above a split `p` are told apart by the root of the minimal polynomial
/// of `w` modulo `p` they contain: `split-plus` takes the smaller root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlaceKind {
    SplitPlus,
    SplitMinus,
    Inert,
    Ramified,
}

impl PlaceKind {
    /// The kind of the conjugate prime.
    pub fn conjugate(self) -> Self {
        match self {
            PlaceKind::SplitPlus => PlaceKind::SplitMinus,
            PlaceKind::SplitMinus => PlaceKind::SplitPlus,
            k => k,
        }
    }

    /// Ramification index over `p`.
    pub fn ramification(self) -> i64 {
        if self == PlaceKind::Ramified {
            2
        } else {
            1
        }
    }
}

/// Integral element `x + y w`.
pub type Int2 = [BigInt; 2];

/// Rational element `x + y w`.
pub type Elt = [Rational; 2];

/// A prime ideal, named by the rational prime below it and its kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeIdeal {
    #[serde(rename = "prime", with = "serde_bigint")]
    pub p: BigInt,
    pub kind: PlaceKind,
}

/// Integral ideal with Hermite basis `{a, b + c w}`, `c | a`, `c | b`,
/// `0 <= b < a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// Binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// `value = gen * ideal`.
#[derive(Clone, Debug)]
struct Tracked {
    gen: Elt,
    ideal: Ideal,
}

const CYCLE_LIMIT: usize = 5_000_000;

#[derive(Clone, Debug)]
pub struct QuadraticField {
    radicand: BigInt,
    disc: BigInt,
    t: BigInt,
    n: BigInt,
    tq: Rational,
    nq: Rational,
}

fn q(x: &BigInt) -> Rational {
    Rational::from_integer(x.clone())
}

fn elt_int(x: &BigInt, y: &BigInt) -> Elt {
    [q(x), q(y)]
}

impl QuadraticField {
    pub fn new(radicand: &BigInt) -> Result<Self> {
        if radicand.is_zero() || radicand.is_one() || !squarefree_decomposition(radicand).1.is_one() {
            return Err(Error::Malformed(format!("{radicand} is not a squarefree radicand")));
        }
        let r4 = radicand.mod_floor(&BigInt::from(4));
        let (t, n, disc) = if r4.is_one() {
            (BigInt::one(), (radicand - 1) / 4, radicand.clone())
        } else {
            (BigInt::zero(), radicand.clone(), radicand * 4u32)
        };
        let (tq, nq) = (q(&t), q(&n));
        Ok(QuadraticField { radicand: radicand.clone(), disc, t, n, tq, nq })
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn is_real(&self) -> bool {
        self.disc.is_positive()
    }

    // ----- elements -----

    pub fn to_elt(&self, x: &FieldElement) -> Elt {
        if self.t.is_zero() {
            [x.a.clone(), x.b.clone()]
        } else {
            // sqrt(s) = 2w - 1
            [&x.a - &x.b, &x.b * q(&BigInt::from(2))]
        }
    }

    pub fn to_field_element(&self, x: &Elt) -> FieldElement {
        if self.t.is_zero() {
            FieldElement::new(x[0].clone(), x[1].clone())
        } else {
            let half = &x[1] / q(&BigInt::from(2));
            FieldElement::new(&x[0] + &half, half)
        }
    }

    fn imul(&self, u: &Int2, v: &Int2) -> Int2 {
        let yy = &u[1] * &v[1];
        [&u[0] * &v[0] + &yy * &self.n, &u[0] * &v[1] + &u[1] * &v[0] + yy * &self.t]
    }

    fn inorm(&self, u: &Int2) -> BigInt {
        &u[0] * &u[0] + &self.t * &u[0] * &u[1] - &self.n * &u[1] * &u[1]
    }

    fn iconj(&self, u: &Int2) -> Int2 {
        [&u[0] + &self.t * &u[1], -&u[1]]
    }

    pub fn mul(&self, u: &Elt, v: &Elt) -> Elt {
        let yy = &u[1] * &v[1];
        [&u[0] * &v[0] + &yy * &self.nq, &u[0] * &v[1] + &u[1] * &v[0] + yy * &self.tq]
    }

    pub fn norm(&self, u: &Elt) -> Rational {
        &u[0] * &u[0] + &self.tq * &u[0] * &u[1] - &self.nq * &u[1] * &u[1]
    }

    pub fn conj(&self, u: &Elt) -> Elt {
        [&u[0] + &self.tq * &u[1], -&u[1]]
    }

    pub fn inv(&self, u: &Elt) -> Result<Elt> {
        let n = self.norm(u);
        if n.is_zero() {
            return Err(Error::NonUnit);
        }
        let c = self.conj(u);
        Ok([&c[0] / &n, &c[1] / &n])
    }

    pub fn pow(&self, u: &Elt, e: &BigInt) -> Result<Elt> {
        let mut base = if e.is_negative() { self.inv(u)? } else { u.clone() };
        let mut e = e.abs();
        let mut acc = self.one();
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if !e.is_zero() {
                base = self.mul(&base, &base);
            }
        }
        Ok(acc)
    }

    pub fn one(&self) -> Elt {
        [Rational::one(), Rational::zero()]
    }

    fn is_integral(u: &Elt) -> bool {
        u[0].is_integer() && u[1].is_integer()
    }

    // ----- primes and valuations -----

    pub fn kind_of(&self, p: &BigInt) -> (PlaceKind, bool) {
        match kronecker(&self.disc, p) {
            0 => (PlaceKind::Ramified, false),
            1 => (PlaceKind::SplitPlus, true),
            _ => (PlaceKind::Inert, false),
        }
    }

    /// The prime ideals above `p`, in kind order.
    pub fn primes_above(&self, p: &BigInt) -> Vec<PrimeIdeal> {
        match self.kind_of(p) {
            (_, true) => vec![
                PrimeIdeal { p: p.clone(), kind: PlaceKind::SplitPlus },
                PrimeIdeal { p: p.clone(), kind: PlaceKind::SplitMinus },
            ],
            (k, false) => vec![PrimeIdeal { p: p.clone(), kind: k }],
        }
    }

    /// Roots of `X^2 - t X - n` modulo `p`, sorted and without repetition.
    fn roots_mod(&self, p: &BigInt) -> Vec<BigInt> {
        let g = |r: &BigInt| (r * r - &self.t * r - &self.n).mod_floor(p);
        let two = BigInt::from(2);
        if p == &two {
            return [BigInt::zero(), BigInt::one()].into_iter().filter(|r| g(r).is_zero()).collect();
        }
        let dg = &self.t * &self.t + &self.n * 4u32;
        let Some(sq) = sqrt_mod_prime(&dg, p) else {
            return Vec::new();
        };
        let inv2 = (p + 1) / 2;
        let mut roots: Vec<BigInt> =
            [&self.t + &sq, &self.t - &sq].iter().map(|x: &BigInt| Integer::mod_floor(&(x * &inv2), p)).collect();
        roots.sort();
        roots.dedup();
        roots
    }

    fn root_for(&self, prime: &PrimeIdeal) -> BigInt {
        let roots = self.roots_mod(&prime.p);
        match prime.kind {
            PlaceKind::SplitMinus => roots[1].clone(),
            _ => roots[0].clone(),
        }
    }

    pub fn prime_ideal(&self, prime: &PrimeIdeal) -> Ideal {
        let p = prime.p.clone();
        match prime.kind {
            PlaceKind::Inert => Ideal { a: p.clone(), b: BigInt::zero(), c: p },
            _ => {
                let r = self.root_for(prime);
                Ideal { b: (-r).mod_floor(&p), a: p, c: BigInt::one() }
            }
        }
    }

    pub fn prime_norm(&self, prime: &PrimeIdeal) -> BigInt {
        match prime.kind {
            PlaceKind::Inert => &prime.p * &prime.p,
            _ => prime.p.clone(),
        }
    }

    /// `p`-adic root of `X^2 - t X - n` congruent to `r`, modulo `p^k`.
    fn hensel_root(&self, r: &BigInt, p: &BigInt, k: u32) -> BigInt {
        let mut root = r.clone();
        let mut prec = 1u32;
        while prec < k {
            prec = (2 * prec).min(k);
            let m = p.pow(prec);
            let g = &root * &root - &self.t * &root - &self.n;
            let dg = (&root * 2u32 - &self.t).mod_floor(&m);
            let inv = dg.extended_gcd(&m).x.mod_floor(&m);
            root = (&root - g * inv).mod_floor(&m);
        }
        root
    }

    /// Integral multiple `m x` and the scale `m`.
    fn integral_part(u: &Elt) -> (Int2, BigInt) {
        let m = common_denominator(u.iter());
        let mq = q(&m);
        ([(&u[0] * &mq).to_integer(), (&u[1] * &mq).to_integer()], m)
    }

    /// Valuation of a nonzero `u` at `prime`.
    pub fn valuation(&self, u: &Elt, prime: &PrimeIdeal) -> Result<i64> {
        let (y, m) = Self::integral_part(u);
        let nm = self.inorm(&y);
        if nm.is_zero() {
            return Err(Error::NonUnit);
        }
        let p = &prime.p;
        let vn = valuation(&nm, p) as i64;
        let vm = valuation(&m, p) as i64;
        Ok(match prime.kind {
            PlaceKind::Inert => vn / 2 - vm,
            PlaceKind::Ramified => vn - 2 * vm,
            _ => {
                let k = vn as u32 + 1;
                let root = self.hensel_root(&self.root_for(prime), p, k);
                let pk = p.pow(k);
                let image = (&y[0] + &y[1] * root).mod_floor(&pk);
                valuation(&image, p) as i64 - vm
            }
        })
    }

    /// Rational primes that can carry a nonzero valuation of `u`.
    pub fn support_candidates(&self, u: &Elt) -> Result<(BigInt, BigInt)> {
        let (y, m) = Self::integral_part(u);
        let nm = self.inorm(&y);
        if nm.is_zero() {
            return Err(Error::NonUnit);
        }
        Ok((nm, m))
    }

    // ----- ideals -----

    pub fn unit_ideal(&self) -> Ideal {
        Ideal { a: BigInt::one(), b: BigInt::zero(), c: BigInt::one() }
    }

    fn basis(&self, i: &Ideal) -> [Int2; 2] {
        [[i.a.clone(), BigInt::zero()], [i.b.clone(), i.c.clone()]]
    }

    pub fn ideal_norm(&self, i: &Ideal) -> BigInt {
        &i.a * &i.c
    }

    /// Hermite form of the lattice spanned by `gens` (assumed of rank 2).
    fn hnf(gens: &[Int2]) -> Ideal {
        let mut pivot: Option<Int2> = None;
        let mut a = BigInt::zero();
        for w in gens {
            if w[1].is_zero() {
                a = a.gcd(&w[0]);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(w.clone()),
                Some(pv) => {
                    let e = pv[1].extended_gcd(&w[1]);
                    let g = e.gcd;
                    let new = [&e.x * &pv[0] + &e.y * &w[0], &e.x * &pv[1] + &e.y * &w[1]];
                    let other = &(&w[1] / &g) * &pv[0] - &(&pv[1] / &g) * &w[0];
                    a = a.gcd(&other);
                    pivot = Some(new);
                }
            }
        }
        let pv = pivot.expect("ideal lattice has full rank");
        assert!(!a.is_zero(), "ideal lattice has full rank");
        let (b, c) = if pv[1].is_negative() { (-&pv[0], -&pv[1]) } else { (pv[0].clone(), pv[1].clone()) };
        Ideal { b: b.mod_floor(&a), a, c }
    }

    pub fn ideal_mul(&self, i: &Ideal, j: &Ideal) -> Ideal {
        let (bi, bj) = (self.basis(i), self.basis(j));
        let gens: Vec<Int2> = bi.iter().flat_map(|u| bj.iter().map(|v| self.imul(u, v))).collect();
        Self::hnf(&gens)
    }

    pub fn ideal_conj(&self, i: &Ideal) -> Ideal {
        let b = self.basis(i);
        Self::hnf(&[self.iconj(&b[0]), self.iconj(&b[1])])
    }

    // ----- forms -----

    fn form_of(&self, basis: &[Int2; 2], norm: &BigInt) -> Form {
        let n1 = self.inorm(&basis[0]);
        let n2 = self.inorm(&basis[1]);
        let sum = [&basis[0][0] + &basis[1][0], &basis[0][1] + &basis[1][1]];
        let n12 = self.inorm(&sum);
        Form { b: (&n12 - &n1 - &n2) / norm, a: n1 / norm, c: n2 / norm }
    }

    /// Reduce a positive definite form, carrying the lattice basis along.
    fn reduce_definite(f: &mut Form, basis: &mut [Int2; 2]) {
        loop {
            let k = (&f.a - &f.b).div_floor(&(&f.a * 2u32));
            if !k.is_zero() {
                translate(f, basis, &k);
            }
            if f.a > f.c || (f.a == f.c && f.b.is_negative()) {
                swap(f, basis);
                continue;
            }
            break;
        }
    }

    fn is_reduced_indefinite(&self, f: &Form) -> bool {
        let d = &self.disc;
        let a2 = f.a.abs() * 2u32;
        if !f.b.is_positive() || &(&f.b * &f.b) >= d {
            return false;
        }
        let lo = &a2 + &f.b;
        let hi = &a2 - &f.b;
        &(&lo * &lo) > d && (hi.is_negative() || &(&hi * &hi) < d)
    }

    /// The reduction operator on indefinite forms; returns the new form
    /// and the translation `k` of the basis change
    /// `(b1, b2) -> (b2, -b1 + k b2)`.
    fn rho(&self, f: &Form) -> (Form, BigInt) {
        let ac = f.c.abs();
        let two_ac = &ac * 2u32;
        let bp = if &(&f.c * &f.c) > &self.disc {
            let r = (-&f.b).mod_floor(&two_ac);
            if r > ac {
                r - &two_ac
            } else {
                r
            }
        } else {
            let s0 = self.disc.sqrt();
            &s0 - (&s0 + &f.b).mod_floor(&two_ac)
        };
        let k = (&bp + &f.b) / (&f.c * 2u32);
        let cp = (&bp * &bp - &self.disc) / (&f.c * 4u32);
        (Form { a: f.c.clone(), b: bp, c: cp }, k)
    }

    fn reduce_indefinite(&self, f: &mut Form, basis: &mut [Int2; 2]) {
        let mut steps = 0;
        while !self.is_reduced_indefinite(f) {
            let (g, k) = self.rho(f);
            apply_rho(basis, &k);
            *f = g;
            steps += 1;
            assert!(steps < CYCLE_LIMIT, "indefinite reduction does not terminate");
        }
    }

    fn reduce_form(&self, f: &mut Form, basis: &mut [Int2; 2]) {
        if self.is_real() {
            self.reduce_indefinite(f, basis)
        } else {
            Self::reduce_definite(f, basis)
        }
    }

    fn cycle_min(&self, start: &Form) -> Form {
        let mut best = start.clone();
        let mut f = start.clone();
        for _ in 0..CYCLE_LIMIT {
            f = self.rho(&f).0;
            if &f == start {
                return best;
            }
            if f < best {
                best = f.clone();
            }
        }
        panic!("cycle of reduced forms does not close");
    }

    /// Canonical invariant of the (wide) ideal class of `i`.
    pub fn class_key(&self, i: &Ideal) -> Form {
        let mut basis = self.basis(i);
        let mut f = self.form_of(&basis, &self.ideal_norm(i));
        self.reduce_form(&mut f, &mut basis);
        if !self.is_real() {
            return f;
        }
        let neg = Form { a: -&f.a, b: f.b.clone(), c: -&f.c };
        self.cycle_min(&f).min(self.cycle_min(&neg))
    }

    /// A generator of `i` when it is principal.
    pub fn principal_generator(&self, i: &Ideal) -> Option<Elt> {
        let mut basis = self.basis(i);
        let mut f = self.form_of(&basis, &self.ideal_norm(i));
        self.reduce_form(&mut f, &mut basis);
        if !self.is_real() {
            return f.a.is_one().then(|| elt_int(&basis[0][0], &basis[0][1]));
        }
        let start = f.clone();
        for _ in 0..CYCLE_LIMIT {
            if f.a.abs().is_one() {
                return Some(elt_int(&basis[0][0], &basis[0][1]));
            }
            let (g, k) = self.rho(&f);
            apply_rho(&mut basis, &k);
            f = g;
            if f == start {
                return None;
            }
        }
        panic!("cycle of reduced forms does not close");
    }

    /// `i = gen * j` with `j` of small norm.
    fn reduce_ideal(&self, i: &Ideal) -> (Elt, Ideal) {
        let norm = self.ideal_norm(i);
        let mut basis = self.basis(i);
        let mut f = self.form_of(&basis, &norm);
        self.reduce_form(&mut f, &mut basis);
        let beta = basis[0].clone();
        let bc = self.iconj(&beta);
        let gens: Vec<Int2> = basis
            .iter()
            .map(|u| {
                let v = self.imul(&bc, u);
                [&v[0] / &norm, &v[1] / &norm]
            })
            .collect();
        let j = Self::hnf(&gens);
        // i = (norm / conj(beta)) j = (norm beta / N(beta)) j
        let s = q(&norm) / q(&self.inorm(&beta));
        (elt_int(&beta[0], &beta[1]).map(|x| x * &s), j)
    }

    fn tracked_mul(&self, x: &Tracked, y: &Tracked) -> Tracked {
        let (f, ideal) = self.reduce_ideal(&self.ideal_mul(&x.ideal, &y.ideal));
        Tracked { gen: self.mul(&self.mul(&x.gen, &y.gen), &f), ideal }
    }

    fn tracked_pow(&self, x: &Tracked, e: u64) -> Tracked {
        let mut acc = Tracked { gen: self.one(), ideal: self.unit_ideal() };
        let mut base = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.tracked_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.tracked_mul(&base, &base);
            }
        }
        acc
    }

    /// A generator of `prod primes[i]^exps[i]` when it is principal.
    pub fn product_generator(&self, primes: &[PrimeIdeal], exps: &[BigInt]) -> Option<Elt> {
        let mut acc = Tracked { gen: self.one(), ideal: self.unit_ideal() };
        let mut denom = BigInt::one();
        for (pr, e) in primes.iter().zip(exps) {
            if e.is_zero() {
                continue;
            }
            let ideal = self.prime_ideal(pr);
            let mag = e.abs().to_u64().expect("exponent fits in u64");
            let factor = if e.is_negative() {
                denom *= self.prime_norm(pr).pow(mag as u32);
                self.ideal_conj(&ideal)
            } else {
                ideal
            };
            let power = self.tracked_pow(&Tracked { gen: self.one(), ideal: factor }, mag);
            acc = self.tracked_mul(&acc, &power);
        }
        let delta = self.principal_generator(&acc.ideal)?;
        let g = self.mul(&acc.gen, &delta);
        let dq = q(&denom);
        Some(g.map(|x| x / &dq))
    }

    // ----- units -----

    pub fn units(&self) -> UnitData {
        let neg = [-Rational::one(), Rational::zero()];
        if !self.is_real() {
            let w = if self.disc == BigInt::from(-4) {
                4
            } else if self.disc == BigInt::from(-3) {
                6
            } else {
                2
            };
            let zeta = if w == 2 { neg } else { elt_int(&BigInt::zero(), &BigInt::one()) };
            return UnitData { torsion_order: w, torsion_generator: zeta, fundamental: None, log_fundamental: 0.0 };
        }
        let eps = self.fundamental_unit();
        let log = self.log_abs(&eps);
        UnitData { torsion_order: 2, torsion_generator: neg, fundamental: Some(eps), log_fundamental: log }
    }

    fn fundamental_unit(&self) -> Elt {
        let s = &self.radicand;
        let (h, k) = pell(s);
        let eps1 = FieldElement::new(q(&h), q(&k));
        if self.t.is_zero() {
            return self.to_elt(&eps1);
        }
        // the unit index of Z[sqrt s] in the maximal order is 1 or 3
        let n1 = &h * &h - s * &k * &k;
        let target = &h * 2u32;
        let t0 = target.cbrt();
        for dt in -2i64..=2 {
            let t = &t0 + dt;
            if !t.is_positive() || &t * &t * &t - &n1 * &t * 3 != target {
                continue;
            }
            let num = &t * &t - &n1 * 4u32;
            if !(&num % s).is_zero() {
                continue;
            }
            let y2 = num / s;
            if y2.is_negative() {
                continue;
            }
            let y = y2.sqrt();
            if &y * &y != y2 {
                continue;
            }
            let two = q(&BigInt::from(2));
            let eta = self.to_elt(&FieldElement::new(q(&t) / &two, q(&y) / &two));
            let cube = self.mul(&self.mul(&eta, &eta), &eta);
            if cube == self.to_elt(&eps1) {
                return eta;
            }
        }
        self.to_elt(&eps1)
    }

    /// `ln |u|` under the real embedding with `sqrt(s) > 0`.
    fn log_abs(&self, u: &Elt) -> f64 {
        let fe = self.to_field_element(u);
        let ln_q = |x: &Rational| ln_abs(x.numer()) - ln_abs(x.denom());
        if fe.b.is_zero() {
            return ln_q(&fe.a);
        }
        let lb = ln_q(&fe.b) + 0.5 * ln_abs(&self.radicand);
        if fe.a.is_zero() {
            return lb;
        }
        let la = ln_q(&fe.a);
        let big = la.max(lb);
        let sum = big + ((la - big).exp() + (lb - big).exp()).ln();
        if fe.a.is_positive() == fe.b.is_positive() {
            sum
        } else {
            // |a + b sqrt s| = |N| / (|a| + |b| sqrt s)
            ln_q(&self.norm(u)) - sum
        }
    }

    /// `(j, k)` with `u = zeta^j eps^k`.
    pub fn unit_log(&self, units: &UnitData, u: &Elt) -> Result<(u32, BigInt)> {
        if !Self::is_integral(u) || !self.norm(u).abs().is_one() {
            return Err(Error::Malformed("not a unit".into()));
        }
        let mut k = BigInt::zero();
        let mut rest = u.clone();
        if let Some(eps) = &units.fundamental {
            let approx = (self.log_abs(u) / units.log_fundamental).round();
            let k0 = BigInt::from(approx as i64);
            let mut found = false;
            for dk in [0i64, -1, 1] {
                let kk = &k0 + dk;
                let r = self.mul(u, &self.pow(eps, &-&kk)?);
                if r[1].is_zero() && r[0].abs().is_one() {
                    k = kk;
                    rest = r;
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::Malformed("unit logarithm failed".into()));
            }
        }
        let mut z = self.one();
        for j in 0..units.torsion_order {
            if z == rest {
                return Ok((j, k));
            }
            z = self.mul(&z, &units.torsion_generator);
        }
        Err(Error::Malformed("unit logarithm failed".into()))
    }

    // ----- class group -----

    /// Norm bound for the class-group generators.
    pub fn generator_bound(&self, bach: bool) -> u64 {
        let ad = self.disc.abs().to_f64().unwrap_or(f64::MAX);
        let b = if bach {
            12.0 * ad.ln().powi(2)
        } else if self.is_real() {
            ad.sqrt() / 2.0
        } else {
            2.0 * ad.sqrt() / std::f64::consts::PI
        };
        b.floor() as u64
    }

    pub fn class_group(&self, bach: bool) -> ClassGroupData {
        let bound = self.generator_bound(bach);
        let bq = BigInt::from(bound);
        let factor_base: Vec<PrimeIdeal> = primes_up_to(bound)
            .into_iter()
            .flat_map(|p| self.primes_above(&BigInt::from(p)))
            .filter(|pr| self.prime_norm(pr) <= bq)
            .collect();
        let nfb = factor_base.len();
        // incremental enumeration of the subgroup generated so far
        let mut elements: Vec<(Ideal, Vec<i64>)> = vec![(self.unit_ideal(), vec![0; nfb])];
        let mut table: HashMap<Form, Vec<i64>> = HashMap::new();
        table.insert(self.class_key(&self.unit_ideal()), vec![0; nfb]);
        let mut relations = Vec::with_capacity(nfb);
        let mut generating = Vec::new();
        for (i, pr) in factor_base.iter().enumerate() {
            let g = self.reduce_ideal(&self.prime_ideal(pr)).1;
            let mut x = g.clone();
            let mut order = 1i64;
            let rel = loop {
                if let Some(e) = table.get(&self.class_key(&x)) {
                    let mut rel: Vec<i64> = e.iter().map(|v| -v).collect();
                    rel[i] += order;
                    break rel;
                }
                x = self.reduce_ideal(&self.ideal_mul(&x, &g)).1;
                order += 1;
            };
            relations.push(rel);
            if order > 1 {
                generating.push(i);
                let mut layer = elements.clone();
                for _ in 1..order {
                    layer = layer
                        .into_iter()
                        .map(|(ideal, mut e)| {
                            e[i] += 1;
                            (self.reduce_ideal(&self.ideal_mul(&ideal, &g)).1, e)
                        })
                        .collect();
                    for (ideal, e) in &layer {
                        table.insert(self.class_key(ideal), e.clone());
                    }
                    elements.extend(layer.iter().cloned());
                }
            }
        }
        let rel_rows: Vec<Vec<BigInt>> =
            relations.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let relations = IntMatrix::from_rows(&rel_rows, nfb);
        let snf = smith_normal_form(&relations);
        let positions: Vec<usize> = (0..nfb).filter(|&k| !snf.invariants[k].is_one()).collect();
        let invariants = positions.iter().map(|&k| snf.invariants[k].clone()).collect();
        ClassGroupData { factor_base, relations, generating, invariants, positions, v: snf.v, table }
    }
}

fn translate(f: &mut Form, basis: &mut [Int2; 2], k: &BigInt) {
    let nb1 = [&basis[1][0] + k * &basis[0][0], &basis[1][1] + k * &basis[0][1]];
    basis[1] = nb1;
    f.c = &f.a * k * k + &f.b * k + &f.c;
    f.b = &f.b + &f.a * k * 2u32;
}

fn swap(f: &mut Form, basis: &mut [Int2; 2]) {
    let b1 = basis[1].clone();
    let b0 = std::mem::replace(&mut basis[0], b1);
    basis[1] = [-&b0[0], -&b0[1]];
    std::mem::swap(&mut f.a, &mut f.c);
    f.b = -&f.b;
}

fn apply_rho(basis: &mut [Int2; 2], k: &BigInt) {
    let b0 = basis[0].clone();
    let b1 = basis[1].clone();
    basis[0] = b1.clone();
    basis[1] = [&b1[0] * k - &b0[0], &b1[1] * k - &b0[1]];
}

/// Least solution `h + k sqrt(s) > 1` of `h^2 - s k^2 = +-1`.
fn pell(s: &BigInt) -> (BigInt, BigInt) {
    let a0 = s.sqrt();
    let (mut m, mut d, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    loop {
        if (&h * &h - s * &k * &k).abs().is_one() {
            return (h, k);
        }
        m = &d * &a - &m;
        d = (s - &m * &m) / &d;
        a = (&a0 + &m) / &d;
        let hn = &a * &h + &h_prev;
        let kn = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, hn);
        k_prev = std::mem::replace(&mut k, kn);
    }
}

/// Roots of unity and fundamental unit.
#[derive(Clone, Debug)]
pub struct UnitData {
    pub torsion_order: u32,
    pub torsion_generator: Elt,
    pub fundamental: Option<Elt>,
    log_fundamental: f64,
}

/// Class group as `Z^FB / relations`, with a lookup table from class
/// invariants to exponent vectors.
#[derive(Clone, Debug)]
pub struct ClassGroupData {
    pub factor_base: Vec<PrimeIdeal>,
    pub relations: IntMatrix,
    /// Factor-base indices that generate the group.
    pub generating: Vec<usize>,
    /// Nontrivial invariant factors.
    pub invariants: Vec<BigInt>,
    positions: Vec<usize>,
    v: IntMatrix,
    table: HashMap<Form, Vec<i64>>,
}

impl ClassGroupData {
    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    /// Exponents over the factor base of an ideal in the class of `i`.
    pub fn discrete_log(&self, field: &QuadraticField, i: &Ideal) -> Vec<i64> {
        self.table
            .get(&field.class_key(i))
            .cloned()
            .expect("factor base generates the class group")
    }

    /// Coordinates in `prod Z / invariants` of a factor-base exponent vector.
    pub fn coordinates(&self, exps: &[i64]) -> Vec<BigInt> {
        let e: Vec<BigInt> = exps.iter().map(|&x| BigInt::from(x)).collect();
        self.positions
            .iter()
            .zip(&self.invariants)
            .map(|(&k, d)| {
                let col = self.v.column(k);
                let s: BigInt = e.iter().zip(&col).map(|(x, y)| x * y).sum();
                s.mod_floor(d)
            })
            .collect()
    }
}

/// S-unit data of one quadratic field: the places above `S`, a basis of
/// the principal relations among them, and one generator per relation.
#[derive(Clone, Debug)]
pub struct QuadraticSUnits {
    pub places: Vec<PrimeIdeal>,
    pub basis: Vec<Vec<BigInt>>,
    pub generators: Vec<Elt>,
    basis_t_inverse: RationalMatrix,
}

impl QuadraticSUnits {
    pub fn new(field: &QuadraticField, class: &ClassGroupData, primes: &[BigInt]) -> Result<Self> {
        let places: Vec<PrimeIdeal> = primes.iter().flat_map(|p| field.primes_above(p)).collect();
        let t = places.len();
        let r = class.invariants.len();
        let basis: Vec<Vec<BigInt>> = if r == 0 {
            (0..t).map(|i| (0..t).map(|j| BigInt::from(u8::from(i == j))).collect()).collect()
        } else {
            let coords: Vec<Vec<BigInt>> = places
                .iter()
                .map(|pr| class.coordinates(&class.discrete_log(field, &field.prime_ideal(pr))))
                .collect();
            let mut m = IntMatrix::zeros(r, t + r);
            for (j, c) in coords.iter().enumerate() {
                for (i, x) in c.iter().enumerate() {
                    m.set(i, j, x.clone());
                }
            }
            for (i, d) in class.invariants.iter().enumerate() {
                m.set(i, t + i, d.clone());
            }
            let proj: Vec<Vec<BigInt>> = integer_kernel(&m).into_iter().map(|k| k[..t].to_vec()).collect();
            lattice_basis(&proj, t)
        };
        if basis.len() != t {
            return Err(Error::InconsistentPresentation("S-unit relation lattice is not of full rank".into()));
        }
        let generators = basis
            .iter()
            .map(|y| {
                field.product_generator(&places, y).ok_or_else(|| {
                    Error::InconsistentPresentation("relation ideal is not principal".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let bt = RationalMatrix::from_columns(
            &basis.iter().map(|row| row.iter().map(q).collect::<Vec<_>>()).collect::<Vec<_>>(),
        )?;
        let basis_t_inverse = if t == 0 {
            bt
        } else {
            bt.inverse().ok_or_else(|| Error::InconsistentPresentation("singular relation basis".into()))?
        };
        Ok(QuadraticSUnits { places, basis, generators, basis_t_inverse })
    }

    /// `(torsion exponent, fundamental-unit exponent, generator exponents)`
    /// of an S-unit.
    pub fn log(&self, field: &QuadraticField, units: &UnitData, u: &Elt) -> Result<(u32, BigInt, Vec<BigInt>)> {
        let v: Vec<Rational> = self
            .places
            .iter()
            .map(|pr| field.valuation(u, pr).map(|x| q(&BigInt::from(x))))
            .collect::<Result<_>>()?;
        let z = if v.is_empty() { Vec::new() } else { self.basis_t_inverse.mul_vec(&v)? };
        let mut zi = Vec::with_capacity(z.len());
        for x in &z {
            if !x.is_integer() {
                return Err(not_s_unit());
            }
            zi.push(x.to_integer());
        }
        let mut rest = u.clone();
        for (g, e) in self.generators.iter().zip(&zi) {
            if !e.is_zero() {
                rest = field.mul(&rest, &field.pow(g, &-e)?);
            }
        }
        let (j, k) = field.unit_log(units, &rest).map_err(|_| not_s_unit())?;
        Ok((j, k, zi))
    }
}

fn not_s_unit() -> Error {
    Error::Malformed("element is not an S-unit".into())
}
