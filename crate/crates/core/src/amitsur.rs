//! The Amitsur algebra `A(F, c)` and its split-case bridge to Brauer
//! factor sets.
//!
//! `A(F, c)` is `F (x) F` with product
//! `a * a' = Tr_{F^3/F^2}(eps_2(a) c eps_0(a'))`.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etale::{delta, epsilon, is_cocycle, trace_r2_r1, EtaleAlgebra, TensorElement};
use crate::exact::rational::serde_rational_vec;
use crate::exact::{solve_linear, LinearSolution, Rational, RationalMatrix};

/// A level-2 unit `c` with `delta(c) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cocycle2 {
    value: TensorElement,
}

impl Cocycle2 {
    pub fn new(value: TensorElement) -> Result<Self> {
        if value.level() != 2 {
            return Err(Error::LevelMismatch(format!("2-cocycle at level {}", value.level())));
        }
        if !is_cocycle(&value)? {
            return Err(Error::NotInKernel);
        }
        Ok(Cocycle2 { value })
    }

    pub fn trivial(algebra: &Arc<EtaleAlgebra>) -> Self {
        Cocycle2 { value: TensorElement::one(algebra, 2) }
    }

    /// `c * delta(a)` for a level-1 unit `a`.
    pub fn twisted(&self, a: &TensorElement) -> Result<Self> {
        Ok(Cocycle2 { value: self.value.mul(&delta(a)?)? })
    }

    pub fn value(&self) -> &TensorElement {
        &self.value
    }

    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        self.value.algebra()
    }
}

/// Product in `A(F, c)`.
pub fn amitsur_mul(a: &TensorElement, b: &TensorElement, c: &Cocycle2) -> Result<TensorElement> {
    if a.level() != 1 || b.level() != 1 {
        return Err(Error::LevelMismatch("Amitsur algebra elements live at level 1".into()));
    }
    let x = epsilon(2, a)?.mul(c.value())?.mul(&epsilon(0, b)?)?;
    trace_r2_r1(&x)
}

fn basis(algebra: &Arc<EtaleAlgebra>) -> Vec<TensorElement> {
    let d = algebra.degree();
    (0..d * d).map(|k| TensorElement::monomial(algebra, &[k / d, k % d])).collect()
}

/// The two-sided unit of `A(F, c)`, found by solving `u * e = e` for every
/// basis element `e`.
pub fn amitsur_unit(c: &Cocycle2) -> Result<TensorElement> {
    let alg = c.algebra();
    let n = alg.dim(1);
    let basis = basis(alg);
    // column j: the stacked products b_j * e_i
    let mut m = RationalMatrix::zeros(n * n, n);
    let mut rhs = Vec::with_capacity(n * n);
    for (j, bj) in basis.iter().enumerate() {
        for (i, ei) in basis.iter().enumerate() {
            let p = amitsur_mul(bj, ei, c)?;
            for (r, v) in p.coeffs().iter().enumerate() {
                m.set(i * n + r, j, v.clone());
            }
        }
    }
    for e in &basis {
        rhs.extend(e.coeffs().iter().cloned());
    }
    let unit = match solve_linear(&m, &rhs)? {
        LinearSolution::Solved { particular, kernel } if kernel.is_empty() => {
            TensorElement::new(alg, 1, particular)?
        }
        _ => return Err(Error::NoUnit),
    };
    for e in &basis {
        if amitsur_mul(e, &unit, c)? != *e {
            return Err(Error::NoUnit);
        }
    }
    Ok(unit)
}

/// `a (x) a' -> a phi(a')` with `phi(a')` the row `b -> Tr(a' b)`: the
/// isomorphism `A(F, 1) -> M_d(Q)` in the monomial basis of `F`.
pub fn trivial_matrix_iso(a: &TensorElement) -> Result<RationalMatrix> {
    if a.level() != 1 {
        return Err(Error::LevelMismatch(format!("level-{} element", a.level())));
    }
    let alg = a.algebra();
    let d = alg.degree();
    let mut m = RationalMatrix::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            let c = &a.coeffs()[j * d + k];
            if c.is_zero() {
                continue;
            }
            for col in 0..d {
                let v = m.get(j, col) + c * alg.trace_of_power(k + col);
                m.set(j, col, v);
            }
        }
    }
    Ok(m)
}

/// `m -> m a^{-1}`, an isomorphism `A(F, c) -> A(F, c delta(a))`.
pub fn twist_by_cochain(m: &TensorElement, a: &TensorElement) -> Result<TensorElement> {
    m.mul(&a.inv()?)
}

fn check_roots(algebra: &EtaleAlgebra, roots: &[Rational]) -> Result<()> {
    if roots.len() != algebra.degree() {
        return Err(Error::InvalidRoots(format!("{} roots for degree {}", roots.len(), algebra.degree())));
    }
    for (i, r) in roots.iter().enumerate() {
        if !algebra.polynomial().eval(r).is_zero() {
            return Err(Error::InvalidRoots(format!("{} is not a root", crate::exact::format_rational(r))));
        }
        if roots[..i].contains(r) {
            return Err(Error::InvalidRoots("roots are not distinct".into()));
        }
    }
    Ok(())
}

/// Evaluation at all root tuples: entry `(i_0, ..., i_n)` (row-major) is
/// `a(r_{i_0}, ..., r_{i_n})`.
pub fn psi(a: &TensorElement, roots: &[Rational]) -> Result<Vec<Rational>> {
    let alg = a.algebra();
    check_roots(alg, roots)?;
    let d = alg.degree();
    let n1 = a.level() + 1;
    let powers: Vec<Vec<Rational>> = roots
        .iter()
        .map(|r| {
            let mut v = vec![Rational::one()];
            for k in 1..d {
                v.push(&v[k - 1] * r);
            }
            v
        })
        .collect();
    let size = d.pow(n1 as u32);
    let mut out = Vec::with_capacity(size);
    for point in 0..size {
        let ix = digits(point, d, n1);
        let mut s = Rational::zero();
        for (mono, c) in a.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = digits(mono, d, n1);
            let mut t = c.clone();
            for (slot, &k) in e.iter().enumerate() {
                t *= &powers[ix[slot]][k];
            }
            s += t;
        }
        out.push(s);
    }
    Ok(out)
}

fn digits(mut idx: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in (0..len).rev() {
        out[slot] = idx % base;
        idx /= base;
    }
    out
}

fn undigits(e: &[usize], base: usize) -> usize {
    e.iter().fold(0, |acc, &x| acc * base + x)
}

/// Brauer differential of a `d^(n+1)` array of nonzero rationals:
/// `(delta a)_{i_0..i_{n+1}} = prod_j a_{i with slot j deleted}^((-1)^j)`.
pub fn brauer_delta(values: &[Rational], d: usize, level: usize) -> Result<Vec<Rational>> {
    if values.len() != d.pow(level as u32 + 1) {
        return Err(Error::DimensionMismatch(format!("{} values at level {level}", values.len())));
    }
    if values.iter().any(Zero::is_zero) {
        return Err(Error::NonUnit);
    }
    let n2 = level + 2;
    Ok((0..d.pow(n2 as u32))
        .map(|idx| {
            let ix = digits(idx, d, n2);
            let mut acc = Rational::one();
            for j in 0..n2 {
                let mut face = ix.clone();
                face.remove(j);
                let v = &values[undigits(&face, d)];
                if j % 2 == 0 {
                    acc *= v;
                } else {
                    acc /= v;
                }
            }
            acc
        })
        .collect())
}

/// Split-case factor set: roots of `P` and the `d^3` array `c_{i,k,j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSet {
    #[serde(with = "serde_rational_vec")]
    pub roots: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub values: Vec<Rational>,
}

impl FactorSet {
    pub fn new(roots: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        let d = roots.len();
        if values.len() != d * d * d {
            return Err(Error::DimensionMismatch(format!("{} values for {d} roots", values.len())));
        }
        if values.iter().any(Zero::is_zero) {
            return Err(Error::NonUnit);
        }
        Ok(FactorSet { roots, values })
    }

    /// `Psi_2(c)`.
    pub fn from_cocycle(c: &Cocycle2, roots: &[Rational]) -> Result<Self> {
        Self::new(roots.to_vec(), psi(c.value(), roots)?)
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn get(&self, i: usize, k: usize, j: usize) -> &Rational {
        let d = self.degree();
        &self.values[(i * d + k) * d + j]
    }

    pub fn all_ones(roots: Vec<Rational>) -> Self {
        let d = roots.len();
        FactorSet { roots, values: vec![Rational::one(); d * d * d] }
    }

    /// `c_{i,k,j} c_{i,j,l} = c_{i,k,l} c_{k,j,l}` for all indices.
    pub fn is_cocycle(&self) -> bool {
        let d = self.degree();
        for i in 0..d {
            for k in 0..d {
                for j in 0..d {
                    for l in 0..d {
                        if self.get(i, k, j) * self.get(i, j, l) != self.get(i, k, l) * self.get(k, j, l) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// `l''_{ij} = sum_k l_{ik} c_{ikj} l'_{kj}`.
pub fn brauer_mul(l: &RationalMatrix, l2: &RationalMatrix, fs: &FactorSet) -> Result<RationalMatrix> {
    let d = fs.degree();
    for m in [l, l2] {
        if m.rows != d || m.cols != d {
            return Err(Error::DimensionMismatch(format!("{}x{} array for degree {d}", m.rows, m.cols)));
        }
    }
    let mut out = RationalMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut s = Rational::zero();
            for k in 0..d {
                s += l.get(i, k) * fs.get(i, k, j) * l2.get(k, j);
            }
            out.set(i, j, s);
        }
    }
    Ok(out)
}

/// `Psi_1` as a `d x d` array.
pub fn psi_matrix(a: &TensorElement, roots: &[Rational]) -> Result<RationalMatrix> {
    let d = roots.len();
    RationalMatrix::from_entries(d, d, psi(a, roots)?)
}

/// Normalise `c_{i,i,i} = 1` by the cochain `a` with `a_{i,i} = c_{i,i,i}^{-1}`
/// and `1` elsewhere; returns `(c * delta(a), a)`.
pub fn reduce_factor_set(fs: &FactorSet) -> Result<(FactorSet, RationalMatrix)> {
    let d = fs.degree();
    let mut a = RationalMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let v = if i == j { fs.get(i, i, i).recip() } else { Rational::one() };
            a.set(i, j, v);
        }
    }
    let da = brauer_delta(&a.entries, d, 1)?;
    let values = fs.values.iter().zip(&da).map(|(x, y)| x * y).collect();
    Ok((FactorSet { roots: fs.roots.clone(), values }, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use proptest::prelude::*;

    fn alg(c: &[i64]) -> Arc<EtaleAlgebra> {
        EtaleAlgebra::from_ints(c).unwrap()
    }

    fn mono(f: &Arc<EtaleAlgebra>, e: &[usize]) -> TensorElement {
        TensorElement::monomial(f, e)
    }

    #[test]
    fn products_in_the_trivial_algebra() {
        let f = alg(&[-2, 0, 1]);
        let one = Cocycle2::trivial(&f);
        let p = amitsur_mul(&mono(&f, &[0, 1]), &mono(&f, &[1, 0]), &one).unwrap();
        assert_eq!(p, TensorElement::scalar(&f, 1, rat(4)));
        let g = alg(&[0, -1, 1]);
        let p = amitsur_mul(&mono(&g, &[0, 1]), &mono(&g, &[1, 0]), &Cocycle2::trivial(&g)).unwrap();
        assert_eq!(p, TensorElement::scalar(&g, 1, rat(1)));
    }

    #[test]
    fn unit_of_the_trivial_algebra() {
        let f = alg(&[-2, 0, 1]);
        let u = amitsur_unit(&Cocycle2::trivial(&f)).unwrap();
        let expected = TensorElement::new(&f, 1, vec![ratio(1, 2), rat(0), rat(0), ratio(1, 4)]).unwrap();
        assert_eq!(u, expected);
        assert!(trivial_matrix_iso(&u).unwrap().is_identity());
    }

    #[test]
    fn matrix_model_examples() {
        let f = alg(&[-2, 0, 1]);
        assert_eq!(trivial_matrix_iso(&mono(&f, &[0, 1])).unwrap(), RationalMatrix::from_ints(2, 2, &[0, 4, 0, 0]));
        assert_eq!(trivial_matrix_iso(&mono(&f, &[1, 0])).unwrap(), RationalMatrix::from_ints(2, 2, &[0, 0, 2, 0]));
    }

    #[test]
    fn psi_examples() {
        let g = alg(&[0, -1, 1]);
        let roots = vec![rat(0), rat(1)];
        assert_eq!(psi(&mono(&g, &[1]), &roots).unwrap(), vec![rat(0), rat(1)]);
        assert_eq!(psi(&mono(&g, &[1, 1]), &roots).unwrap(), vec![rat(0), rat(0), rat(0), rat(1)]);
        assert_eq!(psi(&TensorElement::one(&g, 2), &roots).unwrap(), vec![rat(1); 8]);
        assert!(matches!(psi(&mono(&g, &[1]), &[rat(0), rat(0)]), Err(Error::InvalidRoots(_))));
        assert!(matches!(psi(&mono(&g, &[1]), &[rat(0), rat(2)]), Err(Error::InvalidRoots(_))));
    }

    #[test]
    fn brauer_products() {
        let fs = FactorSet::all_ones(vec![rat(0), rat(1)]);
        let ones = RationalMatrix::from_ints(2, 2, &[1, 1, 1, 1]);
        assert_eq!(brauer_mul(&ones, &ones, &fs).unwrap(), RationalMatrix::from_ints(2, 2, &[2, 2, 2, 2]));
        let a = RationalMatrix::from_ints(2, 2, &[1, 2, 3, 4]);
        let b = RationalMatrix::from_ints(2, 2, &[0, -1, 5, 2]);
        assert_eq!(brauer_mul(&a, &b, &fs).unwrap(), a.try_mul(&b).unwrap());
    }

    #[test]
    fn factor_set_reduction() {
        let roots = vec![rat(0), rat(1)];
        let fs = FactorSet::all_ones(roots.clone());
        let (r, a) = reduce_factor_set(&fs).unwrap();
        assert_eq!(r, fs);
        assert!(a.entries.iter().all(One::is_one));

        // the coboundary of b with b_{1,1} = 5 has c_{1,1,1} = 5
        let mut b = RationalMatrix::from_ints(2, 2, &[1, 1, 1, 1]);
        b.set(1, 1, rat(5));
        let values = brauer_delta(&b.entries, 2, 1).unwrap();
        let fs = FactorSet::new(roots, values).unwrap();
        assert!(fs.is_cocycle());
        assert_eq!(fs.get(1, 1, 1), &rat(5));
        let (r, a) = reduce_factor_set(&fs).unwrap();
        assert_eq!(a.get(1, 1), &ratio(1, 5));
        assert_eq!(a.get(0, 1), &rat(1));
        assert!((0..2).all(|i| r.get(i, i, i).is_one()));
        assert!(r.is_cocycle());
        assert_eq!(reduce_factor_set(&r).unwrap().0, r);
    }

    fn small_unit(f: &Arc<EtaleAlgebra>, level: usize, seed: &[i64]) -> Option<TensorElement> {
        let n = f.dim(level);
        let coeffs: Vec<i64> = (0..n).map(|i| seed[i % seed.len()] + (i as i64 * 7) % 3).collect();
        let a = TensorElement::from_ints(f, level, &coeffs).unwrap();
        a.is_unit().then_some(a)
    }

    fn algebras() -> Vec<Arc<EtaleAlgebra>> {
        vec![alg(&[0, -1, 1]), alg(&[-2, 0, 1]), alg(&[0, -1, 0, 1]), alg(&[1, 1, 1])]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn associativity_over_random_coboundaries(which in 0usize..4,
                s in prop::collection::vec(-3i64..=3, 1..6),
                x in prop::collection::vec(-3i64..=3, 1..6),
                y in prop::collection::vec(-3i64..=3, 1..6),
                z in prop::collection::vec(-3i64..=3, 1..6)) {
            let f = &algebras()[which];
            let Some(a) = small_unit(f, 1, &s) else { return Ok(()) };
            let c = Cocycle2::trivial(f).twisted(&a).unwrap();
            let el = |v: &[i64]| TensorElement::from_ints(f, 1, &(0..f.dim(1)).map(|i| v[i % v.len()] - i as i64 % 2).collect::<Vec<_>>()).unwrap();
            let (x, y, z) = (el(&x), el(&y), el(&z));
            let lhs = amitsur_mul(&amitsur_mul(&x, &y, &c).unwrap(), &z, &c).unwrap();
            let rhs = amitsur_mul(&x, &amitsur_mul(&y, &z, &c).unwrap(), &c).unwrap();
            prop_assert_eq!(lhs, rhs);
            let u = amitsur_unit(&c).unwrap();
            prop_assert_eq!(amitsur_mul(&x, &u, &c).unwrap(), x.clone());
            // twisting is a homomorphism A(F, c) -> A(F, c delta(b)) and composes
            if let Some(b) = small_unit(f, 1, &z.coeffs().iter().map(|_| 1).chain(s.iter().copied()).collect::<Vec<_>>()) {
                let c2 = c.twisted(&b).unwrap();
                let lhs = twist_by_cochain(&amitsur_mul(&x, &y, &c).unwrap(), &b).unwrap();
                let rhs = amitsur_mul(&twist_by_cochain(&x, &b).unwrap(), &twist_by_cochain(&y, &b).unwrap(), &c2).unwrap();
                prop_assert_eq!(lhs, rhs);
                let twice = twist_by_cochain(&twist_by_cochain(&x, &a).unwrap(), &b).unwrap();
                prop_assert_eq!(twice, twist_by_cochain(&x, &a.mul(&b).unwrap()).unwrap());
            }
        }

        #[test]
        fn matrix_model_is_multiplicative(which in 0usize..4,
                x in prop::collection::vec(-4i64..=4, 9), y in prop::collection::vec(-4i64..=4, 9)) {
            let f = &algebras()[which];
            let n = f.dim(1);
            let x = TensorElement::from_ints(f, 1, &x[..n]).unwrap();
            let y = TensorElement::from_ints(f, 1, &y[..n]).unwrap();
            let one = Cocycle2::trivial(f);
            let lhs = trivial_matrix_iso(&amitsur_mul(&x, &y, &one).unwrap()).unwrap();
            let rhs = trivial_matrix_iso(&x).unwrap().try_mul(&trivial_matrix_iso(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn psi_intertwines_products_and_differentials(split in 0usize..2,
                s in prop::collection::vec(-3i64..=3, 1..6),
                x in prop::collection::vec(-3i64..=3, 9), y in prop::collection::vec(-3i64..=3, 9)) {
            let (f, roots) = if split == 0 {
                (alg(&[0, -1, 1]), vec![rat(0), rat(1)])
            } else {
                (alg(&[0, -1, 0, 1]), vec![rat(-1), rat(0), rat(1)])
            };
            let d = f.degree();
            let Some(a) = small_unit(&f, 1, &s) else { return Ok(()) };
            let pa = psi(&a, &roots).unwrap();
            prop_assert_eq!(psi(&delta(&a).unwrap(), &roots).unwrap(), brauer_delta(&pa, d, 1).unwrap());
            let c = Cocycle2::trivial(&f).twisted(&a).unwrap();
            let fs = FactorSet::from_cocycle(&c, &roots).unwrap();
            prop_assert!(fs.is_cocycle());
            let n = f.dim(1);
            let x = TensorElement::from_ints(&f, 1, &x[..n]).unwrap();
            let y = TensorElement::from_ints(&f, 1, &y[..n]).unwrap();
            let lhs = psi_matrix(&amitsur_mul(&x, &y, &c).unwrap(), &roots).unwrap();
            let rhs = brauer_mul(&psi_matrix(&x, &roots).unwrap(), &psi_matrix(&y, &roots).unwrap(), &fs).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
