//! Tensor powers of an étale algebra `F = Q[X]/(P)`.
//!
//! `F^{(n+1)}` is stored as `R_n = Q[X_0..X_n] / (P(X_0), ..., P(X_n))`.
//! Elements are dense coefficient arrays over the monomials
//! `X_0^e_0 ... X_n^e_n`, `0 <= e_i < d`, indexed by
//! `sum e_i d^(n - i)` (lexicographic, `X_0` slowest).

mod components;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::modular::{nonsingular_mod_p, solve_nonsingular};
use crate::exact::rational::serde_rational_vec;
use crate::exact::{is_separable, poly_factor, solve_linear, LinearSolution, Polynomial, Rational, RationalMatrix};

pub use components::{
    face_embeddings, ComponentEmbedding, Component, ComponentField, FieldElement, Root, Splitting,
};

const CACHED_LEVELS: usize = 4;

/// `F = Q[X]/(P)` for a monic separable `P`, with cached arithmetic tables.
pub struct EtaleAlgebra {
    p: Polynomial,
    d: usize,
    factors: Vec<Polynomial>,
    /// `X^k mod P` for `k < 2d - 1`.
    powers: Vec<Vec<Rational>>,
    /// `Tr(X^k)` for `k < d`.
    traces: Vec<Rational>,
    roots: OnceLock<Result<Vec<Root>>>,
    splittings: [OnceLock<Result<Arc<Splitting>>>; CACHED_LEVELS],
}

impl fmt::Debug for EtaleAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EtaleAlgebra({})", self.p)
    }
}

impl PartialEq for EtaleAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for EtaleAlgebra {}

impl EtaleAlgebra {
    /// The algebra defined by `p`, normalised to be monic.
    pub fn new(p: &Polynomial) -> Result<Arc<Self>> {
        if !is_separable(p)? {
            return Err(Error::NotSeparable);
        }
        let p = p.monic();
        let d = p.degree().unwrap();
        let mut powers = Vec::with_capacity(2 * d - 1);
        let mut cur = Polynomial::one();
        for _ in 0..2 * d - 1 {
            let r = cur.rem(&p);
            powers.push((0..d).map(|k| r.coeff(k)).collect::<Vec<_>>());
            cur = &cur * &Polynomial::x();
        }
        // Tr(X^k) is the trace of multiplication by X^k: sum over m of the
        // X^m coefficient of X^(k+m).
        let traces = (0..d).map(|k| (0..d).map(|m| powers[k + m][m].clone()).sum()).collect();
        let factors = poly_factor(&p).into_iter().map(|(f, _)| f).collect();
        Ok(Arc::new(EtaleAlgebra {
            p,
            d,
            factors,
            powers,
            traces,
            roots: OnceLock::new(),
            splittings: Default::default(),
        }))
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Arc<Self>> {
        Self::new(&Polynomial::from_ints(coeffs))
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Monic irreducible factors of `P`.
    pub fn factors(&self) -> &[Polynomial] {
        &self.factors
    }

    /// Dimension `d^(n+1)` of `R_n`.
    pub fn dim(&self, level: usize) -> usize {
        self.d.pow(level as u32 + 1)
    }

    /// `Tr_{F/Q}(X^k)` for `k < d`.
    pub fn power_trace(&self, k: usize) -> &Rational {
        &self.traces[k]
    }

    /// `Tr_{F/Q}(X^k)` for `k < 2d - 1`.
    pub fn trace_of_power(&self, k: usize) -> Rational {
        self.powers[k].iter().zip(&self.traces).map(|(c, t)| c * t).sum()
    }

    /// Symbolic roots of `P`; fails when a factor has degree at least three.
    pub fn roots(&self) -> Result<&[Root]> {
        self.roots
            .get_or_init(|| components::roots_of_factors(&self.factors))
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    /// Rational roots when `P` splits over `Q`.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        self.factors
            .iter()
            .all(|f| f.degree() == Some(1))
            .then(|| self.factors.iter().map(|f| -f.coeff(0)).collect())
    }

    /// Field components of `R_n` with projections.
    pub fn splitting(&self, level: usize) -> Result<Arc<Splitting>> {
        let compute = || -> Result<Arc<Splitting>> {
            let roots = self.roots()?;
            Ok(Arc::new(Splitting::compute(roots, level)?))
        };
        if level < CACHED_LEVELS {
            self.splittings[level].get_or_init(compute).clone()
        } else {
            compute()
        }
    }

    fn exponents(&self, level: usize, mut idx: usize) -> Vec<usize> {
        let mut e = vec![0; level + 1];
        for slot in (0..=level).rev() {
            e[slot] = idx % self.d;
            idx /= self.d;
        }
        e
    }

    fn index(&self, e: &[usize]) -> usize {
        e.iter().fold(0, |acc, &x| acc * self.d + x)
    }

    /// Product of reduced coefficient arrays at the given level.
    fn mul_raw(&self, level: usize, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let d = self.d;
        let n1 = level + 1;
        let m = 2 * d - 1;
        let mut prod = vec![Rational::zero(); m.pow(n1 as u32)];
        let nz_b: Vec<(Vec<usize>, &Rational)> = b
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.exponents(level, i), c))
            .collect();
        for (ia, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ea = self.exponents(level, ia);
            for (eb, cb) in &nz_b {
                let idx = ea.iter().zip(eb).fold(0, |acc, (x, y)| acc * m + x + y);
                prod[idx] += ca * *cb;
            }
        }
        // reduce one axis at a time from extent m to extent d
        let mut dims = vec![m; n1];
        for axis in 0..n1 {
            let inner: usize = dims[axis + 1..].iter().product();
            let outer: usize = dims[..axis].iter().product();
            let mut next = vec![Rational::zero(); outer * d * inner];
            for o in 0..outer {
                for e in 0..m {
                    for i in 0..inner {
                        let c = &prod[(o * m + e) * inner + i];
                        if c.is_zero() {
                            continue;
                        }
                        if e < d {
                            next[(o * d + e) * inner + i] += c;
                        } else {
                            for (j, r) in self.powers[e].iter().enumerate() {
                                if !r.is_zero() {
                                    next[(o * d + j) * inner + i] += c * r;
                                }
                            }
                        }
                    }
                }
            }
            prod = next;
            dims[axis] = d;
        }
        prod
    }
}

/// An element of `R_n`, the unique lift with all partial degrees below `d`.
#[derive(Clone)]
pub struct TensorElement {
    algebra: Arc<EtaleAlgebra>,
    level: usize,
    coeffs: Vec<Rational>,
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.coeffs == other.coeffs && self.algebra == other.algebra
    }
}

impl Eq for TensorElement {}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElement(level {}, {})", self.level, self)
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = self.algebra.exponents(self.level, idx);
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("X{i}") } else { format!("X{i}^{k}") })
                .collect();
            let c = crate::exact::format_rational(c);
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl TensorElement {
    pub fn new(algebra: &Arc<EtaleAlgebra>, level: usize, coeffs: Vec<Rational>) -> Result<Self> {
        let n = algebra.dim(level);
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients at level {level}, expected {n}",
                coeffs.len()
            )));
        }
        Ok(TensorElement { algebra: algebra.clone(), level, coeffs })
    }

    pub fn from_ints(algebra: &Arc<EtaleAlgebra>, level: usize, coeffs: &[i64]) -> Result<Self> {
        Self::new(algebra, level, coeffs.iter().map(|&c| crate::exact::rat(c)).collect())
    }

    pub fn zero(algebra: &Arc<EtaleAlgebra>, level: usize) -> Self {
        TensorElement { algebra: algebra.clone(), level, coeffs: vec![Rational::zero(); algebra.dim(level)] }
    }

    pub fn one(algebra: &Arc<EtaleAlgebra>, level: usize) -> Self {
        Self::scalar(algebra, level, Rational::one())
    }

    pub fn scalar(algebra: &Arc<EtaleAlgebra>, level: usize, c: Rational) -> Self {
        let mut z = Self::zero(algebra, level);
        z.coeffs[0] = c;
        z
    }

    /// The monomial `prod X_i^e_i` with every `e_i < d`.
    pub fn monomial(algebra: &Arc<EtaleAlgebra>, exponents: &[usize]) -> Self {
        assert!(!exponents.is_empty() && exponents.iter().all(|&e| e < algebra.d));
        let level = exponents.len() - 1;
        let mut z = Self::zero(algebra, level);
        z.coeffs[algebra.index(exponents)] = Rational::one();
        z
    }

    /// The variable `X_i` at the given level.
    pub fn variable(algebra: &Arc<EtaleAlgebra>, level: usize, i: usize) -> Self {
        if algebra.d == 1 {
            // X = -P(0) in Q[X]/(X + c)
            return Self::scalar(algebra, level, -algebra.p.coeff(0));
        }
        let mut e = vec![0; level + 1];
        e[i] = 1;
        Self::monomial(algebra, &e)
    }

    /// Embed a polynomial `f(X_i)` at the given level.
    pub fn from_polynomial(algebra: &Arc<EtaleAlgebra>, level: usize, i: usize, f: &Polynomial) -> Self {
        let r = f.rem(&algebra.p);
        let mut z = Self::zero(algebra, level);
        for k in 0..algebra.d {
            let mut e = vec![0; level + 1];
            e[i] = k;
            z.coeffs[algebra.index(&e)] = r.coeff(k);
        }
        z
    }

    /// `a_0 (x) a_1 (x) ... (x) a_n` for level-0 factors.
    pub fn tensor(factors: &[TensorElement]) -> Result<Self> {
        let first = factors.first().ok_or_else(|| Error::Malformed("empty tensor product".into()))?;
        let alg = first.algebra.clone();
        let level = factors.len() - 1;
        let mut out = Self::zero(&alg, level);
        for f in factors {
            if f.level != 0 || f.algebra != alg {
                return Err(Error::LevelMismatch("tensor factors must be level-0 elements of one algebra".into()));
            }
        }
        for idx in 0..alg.dim(level) {
            let e = alg.exponents(level, idx);
            let mut c = Rational::one();
            for (f, &k) in factors.iter().zip(&e) {
                c *= &f.coeffs[k];
                if c.is_zero() {
                    break;
                }
            }
            out.coeffs[idx] = c;
        }
        Ok(out)
    }

    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        &self.algebra
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, exponents: &[usize]) -> &Rational {
        &self.coeffs[self.algebra.index(exponents)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(format!("levels {} and {}", self.level, other.level)));
        }
        if self.algebra != other.algebra {
            return Err(Error::LevelMismatch(format!(
                "algebras {} and {}",
                self.algebra.p, other.algebra.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(TensorElement { coeffs, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(TensorElement { coeffs, ..self.clone() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TensorElement { coeffs: self.coeffs.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.algebra.mul_raw(self.level, &self.coeffs, &other.coeffs);
        Ok(TensorElement { coeffs, ..self.clone() })
    }

    /// Matrix of multiplication by `self` in the monomial basis.
    pub fn regular_representation(&self) -> RationalMatrix {
        let n = self.coeffs.len();
        let mut m = RationalMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            let col = self.algebra.mul_raw(self.level, &self.coeffs, &e);
            for (i, c) in col.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    pub fn inv(&self) -> Result<Self> {
        let m = self.regular_representation();
        let one = Self::one(&self.algebra, self.level);
        if let Some(mut sol) = solve_nonsingular(&m, &[one.coeffs.clone()]) {
            return Ok(TensorElement { coeffs: sol.remove(0), ..self.clone() });
        }
        match solve_linear(&m, &one.coeffs)? {
            LinearSolution::Solved { particular, kernel } if kernel.is_empty() => {
                Ok(TensorElement { coeffs: particular, ..self.clone() })
            }
            _ => Err(Error::NonUnit),
        }
    }

    pub fn is_unit(&self) -> bool {
        let m = self.regular_representation();
        nonsingular_mod_p(&m) || m.rank() == self.coeffs.len()
    }

    /// A nonzero `z` with `self * z = 0`, when `self` is a zero divisor.
    pub fn annihilator(&self) -> Option<Self> {
        self.regular_representation()
            .kernel()
            .into_iter()
            .next()
            .map(|coeffs| TensorElement { coeffs, ..self.clone() })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.algebra, self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Images in the field components of `R_n`.
    pub fn project(&self) -> Result<Vec<FieldElement>> {
        Ok(self.algebra.splitting(self.level)?.project(&self.coeffs))
    }

    /// The element with the given component images.
    pub fn from_components(algebra: &Arc<EtaleAlgebra>, level: usize, values: &[FieldElement]) -> Result<Self> {
        let coeffs = algebra.splitting(level)?.lift_values(values)?;
        Self::new(algebra, level, coeffs)
    }
}

/// `epsilon_i^n`: insert `1` at tensor slot `i`, renaming `X_j -> X_(j+1)`
/// for `j >= i`.
pub fn epsilon(i: usize, a: &TensorElement) -> Result<TensorElement> {
    let n = a.level;
    if i > n + 1 {
        return Err(Error::IndexOutOfRange { index: i, max: n + 1 });
    }
    let alg = &a.algebra;
    let mut out = TensorElement::zero(alg, n + 1);
    for (idx, c) in a.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut e = alg.exponents(n, idx);
        e.insert(i, 0);
        out.coeffs[alg.index(&e)] = c.clone();
    }
    Ok(out)
}

/// The Amitsur differential `prod_i epsilon_i(a)^((-1)^i)`, `i = 0..=n+1`.
pub fn delta(a: &TensorElement) -> Result<TensorElement> {
    let mut num = TensorElement::one(&a.algebra, a.level + 1);
    let mut den = num.clone();
    for i in 0..=a.level + 1 {
        let e = epsilon(i, a)?;
        if i % 2 == 0 {
            num = num.mul(&e)?;
        } else {
            den = den.mul(&e)?;
        }
    }
    num.mul(&den.inv()?)
}

/// Whether `delta(a) = 1`, checked without inverting.
pub fn is_cocycle(a: &TensorElement) -> Result<bool> {
    let mut even = TensorElement::one(&a.algebra, a.level + 1);
    let mut odd = even.clone();
    for i in 0..=a.level + 1 {
        let e = epsilon(i, a)?;
        if i % 2 == 0 {
            even = even.mul(&e)?;
        } else {
            odd = odd.mul(&e)?;
        }
    }
    Ok(even == odd && a.is_unit())
}

/// `Tr_{F/Q}` of a level-0 element.
pub fn trace_f(a: &TensorElement) -> Result<Rational> {
    if a.level != 0 {
        return Err(Error::LevelMismatch(format!("trace of a level-{} element", a.level)));
    }
    Ok(a.coeffs.iter().enumerate().map(|(k, c)| c * a.algebra.power_trace(k)).sum())
}

/// `Tr_{F^3/F^2}` along the middle factor: `a_0 (x) a_1 (x) a_2 -> Tr(a_1) a_0 (x) a_2`.
pub fn trace_r2_r1(a: &TensorElement) -> Result<TensorElement> {
    if a.level != 2 {
        return Err(Error::LevelMismatch(format!("relative trace of a level-{} element", a.level)));
    }
    let alg = &a.algebra;
    let d = alg.d;
    let mut out = TensorElement::zero(alg, 1);
    for (idx, c) in a.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (e0, e1, e2) = (idx / (d * d), (idx / d) % d, idx % d);
        let t = alg.power_trace(e1);
        if !t.is_zero() {
            out.coeffs[e0 * d + e2] += c * t;
        }
    }
    Ok(out)
}

/// Components of `R_n` as `(field, representative root tuple)`.
pub fn split_components(algebra: &EtaleAlgebra, level: usize) -> Result<Arc<Splitting>> {
    algebra.splitting(level)
}

#[derive(Serialize, Deserialize)]
struct TensorElementRepr {
    #[serde(rename = "P")]
    p: Polynomial,
    level: usize,
    #[serde(with = "serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for TensorElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorElementRepr { p: self.algebra.p.clone(), level: self.level, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = TensorElementRepr::deserialize(d)?;
        let alg = EtaleAlgebra::new(&r.p).map_err(D::Error::custom)?;
        TensorElement::new(&alg, r.level, r.coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use proptest::prelude::*;

    fn alg(c: &[i64]) -> Arc<EtaleAlgebra> {
        EtaleAlgebra::from_ints(c).unwrap()
    }

    fn el(a: &Arc<EtaleAlgebra>, level: usize, c: &[i64]) -> TensorElement {
        TensorElement::from_ints(a, level, c).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let f = alg(&[-2, 0, 1]);
        let x0 = TensorElement::variable(&f, 0, 0);
        assert_eq!(x0.mul(&x0).unwrap(), TensorElement::scalar(&f, 0, rat(2)));
        let x0x1 = TensorElement::monomial(&f, &[1, 1]);
        assert_eq!(x0x1.mul(&x0x1).unwrap(), TensorElement::scalar(&f, 1, rat(4)));
        assert_eq!(x0x1.mul(&TensorElement::one(&f, 1)).unwrap(), x0x1);
    }

    #[test]
    fn level_mismatch_is_reported() {
        let f = alg(&[-2, 0, 1]);
        let a = TensorElement::one(&f, 0);
        let b = TensorElement::one(&f, 1);
        assert!(matches!(a.mul(&b), Err(Error::LevelMismatch(_))));
    }

    #[test]
    fn inverse_examples() {
        let f = alg(&[-2, 0, 1]);
        let x0 = TensorElement::variable(&f, 0, 0);
        assert_eq!(x0.inv().unwrap(), x0.scale(&ratio(1, 2)));
        assert_eq!(TensorElement::one(&f, 2).inv().unwrap(), TensorElement::one(&f, 2));
        let g = alg(&[0, -1, 1]);
        let x = TensorElement::variable(&g, 0, 0);
        assert_eq!(x.inv(), Err(Error::NonUnit));
        let z = x.annihilator().unwrap();
        assert!(x.mul(&z).unwrap().is_zero() && !z.is_zero());
    }

    #[test]
    fn face_maps() {
        let f = alg(&[-2, 0, 1]);
        let x0 = TensorElement::variable(&f, 0, 0);
        assert_eq!(epsilon(0, &x0).unwrap(), TensorElement::variable(&f, 1, 1));
        assert_eq!(epsilon(1, &x0).unwrap(), TensorElement::variable(&f, 1, 0));
        let x0x1 = TensorElement::monomial(&f, &[1, 1]);
        assert_eq!(epsilon(1, &x0x1).unwrap(), TensorElement::monomial(&f, &[1, 0, 1]));
        assert!(matches!(epsilon(3, &x0x1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn differential_examples() {
        let f = alg(&[-2, 0, 1]);
        assert!(delta(&TensorElement::one(&f, 0)).unwrap().is_one());
        let x0 = TensorElement::variable(&f, 0, 0);
        let expected = TensorElement::monomial(&f, &[1, 1]).scale(&ratio(1, 2));
        assert_eq!(delta(&x0).unwrap(), expected);
    }

    #[test]
    fn traces() {
        let f = alg(&[-2, 0, 1]);
        assert_eq!(trace_f(&TensorElement::one(&f, 0)).unwrap(), rat(2));
        assert_eq!(trace_f(&TensorElement::variable(&f, 0, 0)).unwrap(), rat(0));
        let g = alg(&[0, -1, 1]);
        assert_eq!(trace_f(&TensorElement::variable(&g, 0, 0)).unwrap(), rat(1));
        let h = alg(&[-2, 0, 0, 1]);
        assert_eq!(trace_f(&TensorElement::monomial(&h, &[2])).unwrap(), rat(0));
        assert_eq!(trace_f(&TensorElement::monomial(&h, &[0])).unwrap(), rat(3));

        assert!(trace_r2_r1(&TensorElement::monomial(&f, &[0, 1, 0])).unwrap().is_zero());
        assert_eq!(
            trace_r2_r1(&TensorElement::monomial(&f, &[1, 0, 1])).unwrap(),
            TensorElement::monomial(&f, &[1, 1]).scale(&rat(2))
        );
    }

    #[test]
    fn splittings() {
        let g = alg(&[0, -1, 1]);
        let s = g.splitting(0).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.components.iter().all(|c| c.field == ComponentField::Rational));

        let f = alg(&[-2, 0, 1]);
        let q2 = ComponentField::Quadratic { radicand: 2.into() };
        for (level, count) in [(0, 1), (1, 2), (2, 4)] {
            let s = f.splitting(level).unwrap();
            assert_eq!(s.len(), count);
            assert!(s.components.iter().all(|c| c.field == q2));
        }

        // Q(sqrt 2) and Q(sqrt 3) together give a biquadratic component.
        let h = alg(&[6, 0, -5, 0, 1]);
        assert!(h.splitting(0).is_ok());
        assert_eq!(h.splitting(1).unwrap_err(), Error::UnsupportedDegree(4));
        let c = alg(&[-2, 0, 0, 1]);
        assert_eq!(c.splitting(0).unwrap_err(), Error::UnsupportedDegree(3));
    }

    #[test]
    fn projection_is_multiplicative_on_basis() {
        for p in [&[0, -1, 1][..], &[-2, 0, 1], &[2, 0, -3, 0, 1], &[-3, 0, 1], &[1, 1, 1]] {
            let f = alg(p);
            for level in 0..2 {
                let s = f.splitting(level).unwrap();
                let n = f.dim(level);
                for i in 0..n {
                    for j in 0..n {
                        let mut a = TensorElement::zero(&f, level);
                        a.coeffs[i] = rat(1);
                        let mut b = TensorElement::zero(&f, level);
                        b.coeffs[j] = rat(1);
                        let pa = a.project().unwrap();
                        let pb = b.project().unwrap();
                        let pab = a.mul(&b).unwrap().project().unwrap();
                        for k in 0..s.len() {
                            let field = &s.components[k].field;
                            assert_eq!(field.mul(&pa[k], &pb[k]), pab[k]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn serde_roundtrip() {
        let f = alg(&[-2, 0, 1]);
        let a = TensorElement::new(&f, 1, vec![rat(1), ratio(-1, 2), rat(0), rat(3)]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"P":["-2","0","1"],"level":1,"coeffs":["1","-1/2","0","3"]}"#);
        let b: TensorElement = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    fn algebras() -> Vec<Arc<EtaleAlgebra>> {
        vec![alg(&[0, -1, 1]), alg(&[-2, 0, 1]), alg(&[0, -1, 0, 1]), alg(&[1, 1, 1])]
    }

    fn element(f: &Arc<EtaleAlgebra>, level: usize, seed: &[i64]) -> TensorElement {
        let n = f.dim(level);
        let coeffs: Vec<i64> = (0..n).map(|i| seed[i % seed.len()] + i as i64 % 3).collect();
        el(f, level, &coeffs)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ring_axioms(which in 0usize..4, level in 0usize..3,
                       a in prop::collection::vec(-3i64..=3, 1..9),
                       b in prop::collection::vec(-3i64..=3, 1..9),
                       c in prop::collection::vec(-3i64..=3, 1..9)) {
            let f = &algebras()[which];
            let (a, b, c) = (element(f, level, &a), element(f, level, &b), element(f, level, &c));
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
            if let Ok(ai) = a.inv() {
                prop_assert!(a.mul(&ai).unwrap().is_one());
            }
        }

        #[test]
        fn simplicial_identities(which in 0usize..4, level in 0usize..2,
                                 a in prop::collection::vec(-3i64..=3, 1..9)) {
            let f = &algebras()[which];
            let a = element(f, level, &a);
            let n = level;
            for j in 0..=n + 2 {
                for i in 0..j {
                    let lhs = epsilon(j, &epsilon(i, &a).unwrap()).unwrap();
                    let rhs = epsilon(i, &epsilon(j - 1, &a).unwrap()).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }

        #[test]
        fn delta_is_a_homomorphism_and_squares_to_one(which in 0usize..4, level in 0usize..2,
                a in prop::collection::vec(-3i64..=3, 1..9), b in prop::collection::vec(-3i64..=3, 1..9)) {
            let f = &algebras()[which];
            let (a, b) = (element(f, level, &a), element(f, level, &b));
            prop_assume!(a.is_unit() && b.is_unit());
            let da = delta(&a).unwrap();
            prop_assert!(delta(&da).unwrap().is_one());
            let dab = delta(&a.mul(&b).unwrap()).unwrap();
            prop_assert_eq!(dab, da.mul(&delta(&b).unwrap()).unwrap());
        }

        #[test]
        fn relative_trace_is_linear_over_the_outer_factors(which in 0usize..4,
                a in prop::collection::vec(-3i64..=3, 1..9), b in prop::collection::vec(-3i64..=3, 1..9)) {
            let f = &algebras()[which];
            let (a, b) = (element(f, 2, &a), element(f, 1, &b));
            let lhs = trace_r2_r1(&epsilon(1, &b).unwrap().mul(&a).unwrap()).unwrap();
            prop_assert_eq!(lhs, b.mul(&trace_r2_r1(&a).unwrap()).unwrap());
            let d = rat(f.degree() as i64);
            prop_assert_eq!(trace_r2_r1(&epsilon(1, &b).unwrap()).unwrap(), b.scale(&d));
        }
    }
}
