//! Integer matrices: Smith normal form with transforms, integer solving,
//! kernels, and LLL reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix { rows, cols, entries: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        IntMatrix { rows: rows.len(), cols, entries: rows.concat() }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * prev
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row_i += f * row_r
    fn add_row_multiple(&mut self, i: usize, r: usize, f: &BigInt) {
        for j in 0..self.cols {
            let s = &self.entries[r * self.cols + j];
            if !s.is_zero() {
                let delta = f * s;
                self.entries[i * self.cols + j] += delta;
            }
        }
    }

    /// col_j += f * col_c
    fn add_col_multiple(&mut self, j: usize, c: usize, f: &BigInt) {
        for i in 0..self.rows {
            let s = &self.entries[i * self.cols + c];
            if !s.is_zero() {
                let delta = f * s;
                self.entries[i * self.cols + j] += delta;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.entries[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `D` (length `min(rows, cols)`), nonzero entries first.
    pub invariants: Vec<BigInt>,
    pub rank: usize,
}

/// Nearest-integer quotient.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // floor division leaves a remainder with the sign of b
    let (q, r) = a.div_mod_floor(b);
    if (&r * 2u32).abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);
    let mut rank = 0;
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                        if x.abs().is_one() {
                            break;
                        }
                    }
                }
                if best.is_some_and(|(bi, bj)| d.get(bi, bj).abs().is_one()) {
                    break;
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v, rank);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -round_div(d.get(i, t), d.get(t, t));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -round_div(d.get(t, j), d.get(t, t));
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let piv = d.get(t, t).clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(d.get(i, j) % &piv).is_zero()));
            if let Some(i) = offender {
                let one = BigInt::one();
                d.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                continue;
            }
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }
    finish(u, d, v, rank)
}

fn finish(u: IntMatrix, d: IntMatrix, v: IntMatrix, rank: usize) -> SmithForm {
    let n = d.rows.min(d.cols);
    let invariants = (0..n).map(|i| d.get(i, i).clone()).collect();
    SmithForm { u, d, v, invariants, rank }
}

/// Result of solving `M x = b` over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerSolution {
    Solved(Vec<BigInt>),
    /// Rational row `y` with `y M` integral and `y b` not an integer.
    Insoluble { certificate: Vec<Rational> },
}

/// Solve `M x = b` over `Z` through the Smith form.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<IntegerSolution> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows
        )));
    }
    let snf = smith_normal_form(m);
    Ok(solve_with_smith(&snf, b))
}

pub fn solve_with_smith(snf: &SmithForm, b: &[BigInt]) -> IntegerSolution {
    let c = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); snf.v.rows];
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank {
            let di = &snf.invariants[i];
            let (q, r) = ci.div_rem(di);
            if !r.is_zero() {
                let certificate = snf
                    .u
                    .row(i)
                    .iter()
                    .map(|x| Rational::new(x.clone(), di.clone()))
                    .collect();
                return IntegerSolution::Insoluble { certificate };
            }
            y[i] = q;
        } else if !ci.is_zero() {
            let certificate = snf.u.row(i).iter().cloned().map(Rational::from_integer).collect();
            return IntegerSolution::Insoluble { certificate };
        }
    }
    IntegerSolution::Solved(snf.v.mul_vec(&y))
}

/// A basis of the integer kernel `{x in Z^n : M x = 0}`, LLL-reduced.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let mut basis: Vec<Vec<BigInt>> = (snf.rank..m.cols).map(|j| snf.v.column(j)).collect();
    lll_reduce(&mut basis);
    basis
}

/// An LLL-reduced basis of the lattice spanned by the rows of `gens`.
pub fn lattice_basis(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_rows(gens, dim);
    let snf = smith_normal_form(&m);
    // U M = D V^-1 has exactly `rank` nonzero rows
    let um = snf.u.mul(&m);
    let mut basis: Vec<Vec<BigInt>> = (0..snf.rank).map(|i| um.row(i).to_vec()).collect();
    lll_reduce(&mut basis);
    basis
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn round_rational(q: &Rational) -> BigInt {
    round_div(q.numer(), q.denom())
}

/// Gram-Schmidt data for integer row vectors: `(mu, B)` with
/// `B_i = |b*_i|^2`.
fn gram_schmidt(basis: &[Vec<BigInt>]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = basis.len();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut bb = vec![Rational::zero(); n];
    // inner products <b_i, b*_j> via the standard recursion on integers
    for i in 0..n {
        for j in 0..i {
            let mut r = Rational::from_integer(dot(&basis[i], &basis[j]));
            for k in 0..j {
                r -= &mu[j][k] * &mu[i][k] * &bb[k];
            }
            mu[i][j] = if bb[j].is_zero() { Rational::zero() } else { r / &bb[j] };
        }
        let mut r = Rational::from_integer(dot(&basis[i], &basis[i]));
        for k in 0..i {
            r -= &mu[i][k] * &mu[i][k] * &bb[k];
        }
        bb[i] = r;
    }
    (mu, bb)
}

/// In-place LLL reduction (delta = 3/4) of linearly independent rows.
pub fn lll_reduce(basis: &mut [Vec<BigInt>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let (mut mu, mut bb) = gram_schmidt(basis);
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let size_reduce = |basis: &mut [Vec<BigInt>], mu: &mut Vec<Vec<Rational>>, k: usize, j: usize| {
        if mu[k][j].abs() <= half {
            return;
        }
        let q = round_rational(&mu[k][j]);
        let (lo, hi) = basis.split_at_mut(k);
        for (x, y) in hi[0].iter_mut().zip(&lo[j]) {
            *x -= &q * y;
        }
        let qr = Rational::from_integer(q);
        for l in 0..j {
            let t = &qr * &mu[j][l];
            mu[k][l] -= t;
        }
        mu[k][j] -= qr;
    };
    let mut k = 1;
    while k < n {
        size_reduce(basis, &mut mu, k, k - 1);
        let lhs = bb[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bb[k - 1];
        if lhs >= rhs {
            for j in (0..k.saturating_sub(1)).rev() {
                size_reduce(basis, &mut mu, k, j);
            }
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let m = mu[k][k - 1].clone();
            let b = &bb[k] + &m * &m * &bb[k - 1];
            if b.is_zero() {
                // dependent vectors; fall back to recomputation
                let (m2, b2) = gram_schmidt(basis);
                mu = m2;
                bb = b2;
            } else {
                mu[k][k - 1] = &m * &bb[k - 1] / &b;
                bb[k] = &bb[k - 1] * &bb[k] / &b;
                bb[k - 1] = b;
                for j in 0..k - 1 {
                    let t = mu[k - 1][j].clone();
                    mu[k - 1][j] = mu[k][j].clone();
                    mu[k][j] = t;
                }
                for i in k + 1..n {
                    let t = mu[i][k].clone();
                    mu[i][k] = &mu[i][k - 1] - &m * &t;
                    mu[i][k - 1] = t + &mu[k][k - 1] * &mu[i][k];
                }
            }
            k = (k - 1).max(1);
        }
    }
}

/// Reduce `x` modulo the lattice spanned by `basis` (nearest-plane rounding).
pub fn reduce_modulo_lattice(x: &[BigInt], basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    if basis.is_empty() {
        return x.to_vec();
    }
    let n = basis.len();
    let (mu, bb) = gram_schmidt(basis);
    // b*_j expressed with rational coordinates
    let dim = x.len();
    let mut bstar: Vec<Vec<Rational>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v: Vec<Rational> = basis[i].iter().cloned().map(Rational::from_integer).collect();
        for k in 0..i {
            if mu[i][k].is_zero() {
                continue;
            }
            for t in 0..dim {
                let d = &mu[i][k] * &bstar[k][t];
                v[t] -= d;
            }
        }
        bstar.push(v);
    }
    let mut y = x.to_vec();
    for j in (0..n).rev() {
        if bb[j].is_zero() {
            continue;
        }
        let ip: Rational = y
            .iter()
            .zip(&bstar[j])
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, b)| Rational::from_integer(a.clone()) * b)
            .sum();
        let c = round_rational(&(ip / &bb[j]));
        if !c.is_zero() {
            for (yt, bt) in y.iter_mut().zip(&basis[j]) {
                *yt -= &c * bt;
            }
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        for i in 0..s.d.rows {
            for j in 0..s.d.cols {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in s.invariants[..s.rank].windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        s
    }

    #[test]
    fn smith_examples() {
        assert_eq!(check(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3])).invariants, ints(&[1, 6]));
        let z = check(&IntMatrix::zeros(2, 3));
        assert_eq!(z.u, IntMatrix::identity(2));
        assert_eq!(z.v, IntMatrix::identity(3));
        assert_eq!(z.rank, 0);
        assert_eq!(check(&IntMatrix::from_i64(2, 2, &[2, 4, 6, 8])).invariants, ints(&[2, 4]));
    }

    #[test]
    fn integer_solving() {
        let m = IntMatrix::from_i64(1, 1, &[2]);
        assert!(matches!(
            solve_integer(&m, &ints(&[3])).unwrap(),
            IntegerSolution::Insoluble { .. }
        ));
        assert_eq!(solve_integer(&m, &ints(&[6])).unwrap(), IntegerSolution::Solved(ints(&[3])));
    }

    #[test]
    fn lattice_basis_of_dependent_rows() {
        let gens = vec![ints(&[2, 0]), ints(&[0, 3]), ints(&[2, 3]), ints(&[4, 6])];
        let b = lattice_basis(&gens, 2);
        assert_eq!(b.len(), 2);
        assert_eq!(IntMatrix::from_rows(&b, 2).determinant().abs(), BigInt::from(6));
        assert!(lattice_basis(&[ints(&[0, 0])], 2).is_empty());
    }

    #[test]
    fn lll_shortens() {
        let mut b = vec![ints(&[1, 1, 1]), ints(&[-1, 0, 2]), ints(&[3, 5, 6])];
        lll_reduce(&mut b);
        let norms: Vec<BigInt> = b.iter().map(|v| dot(v, v)).collect();
        assert!(norms.iter().all(|n| n <= &BigInt::from(6)));
        let m = IntMatrix::from_rows(&b, 3);
        assert!(m.determinant().abs() == BigInt::from(3));
    }

    proptest! {
        #[test]
        fn smith_invariants_hold(entries in prop::collection::vec(-6i64..=6, 12)) {
            check(&IntMatrix::from_i64(3, 4, &entries));
            check(&IntMatrix::from_i64(4, 3, &entries));
        }

        #[test]
        fn kernel_is_exact(entries in prop::collection::vec(-3i64..=3, 8)) {
            let m = IntMatrix::from_i64(2, 4, &entries);
            for k in integer_kernel(&m) {
                prop_assert!(m.mul_vec(&k).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn solutions_verify(entries in prop::collection::vec(-5i64..=5, 6), x in prop::collection::vec(-5i64..=5, 3)) {
            let m = IntMatrix::from_i64(2, 3, &entries);
            let b = m.mul_vec(&ints(&x));
            match solve_integer(&m, &b).unwrap() {
                IntegerSolution::Solved(sol) => prop_assert_eq!(m.mul_vec(&sol), b),
                IntegerSolution::Insoluble { .. } => prop_assert!(false, "image vector reported insoluble"),
            }
        }
    }
}
