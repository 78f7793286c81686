//! Dense matrices over Q and exact Gaussian elimination.
//!
//! Elimination always pivots on the first nonzero entry of the current
//! column, so results are reproducible run to run.

use std::ops::Mul;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{serde_rational_vec, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RationalMatrix {
    pub rows: usize,
    pub cols: usize,
    #[serde(with = "serde_rational_vec")]
    pub entries: Vec<Rational>,
}

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    /// One solution of `M x = b` and a basis of the kernel of `M`.
    Solved { particular: Vec<Rational>, kernel: Vec<Vec<Rational>> },
    /// A row vector `y` with `y M = 0` and `y b != 0`.
    Inconsistent { certificate: Vec<Rational> },
}

impl LinearSolution {
    pub fn particular(&self) -> Option<&[Rational]> {
        match self {
            LinearSolution::Solved { particular, .. } => Some(particular),
            LinearSolution::Inconsistent { .. } => None,
        }
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(RationalMatrix { rows: rows.len(), cols, entries: rows.concat() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: entries.iter().map(|&x| super::rational::rat(x)).collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
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
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j { v.is_one() } else { v.is_zero() }
                })
            })
    }

    /// Reduced row echelon form, returning the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(None);
        (m, pivots)
    }

    /// In-place RREF. When `track` is given, the same row operations are
    /// applied to it (it must have `self.rows` rows).
    fn rref_in_place(&mut self, mut track: Option<&mut RationalMatrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(r, p);
            }
            let inv = self.get(r, c).recip();
            self.scale_row(r, &inv);
            if let Some(t) = track.as_deref_mut() {
                t.scale_row(r, &inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                self.sub_row_multiple(i, r, &f);
                if let Some(t) = track.as_deref_mut() {
                    t.sub_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Rational) {
        for j in 0..self.cols {
            let v = &mut self.entries[i * self.cols + j];
            if !v.is_zero() {
                *v *= c;
            }
        }
    }

    /// row_i -= f * row_r
    fn sub_row_multiple(&mut self, i: usize, r: usize, f: &Rational) {
        for j in 0..self.cols {
            let src = &self.entries[r * self.cols + j];
            if src.is_zero() {
                continue;
            }
            let delta = f * src;
            self.entries[i * self.cols + j] -= delta;
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let cols: Vec<Vec<Rational>> = (0..n).map(|j| Self::identity(n).column(j)).collect();
        if let Some(sol) = super::modular::solve_nonsingular(self, &cols) {
            return Some(Self::from_columns(&sol).expect("square solution"));
        }
        let mut m = self.clone();
        let mut inv = Self::identity(self.rows);
        let pivots = m.rref_in_place(Some(&mut inv));
        (pivots.len() == self.rows).then_some(inv)
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                let f = m.get(i, c) / &piv;
                if !f.is_zero() {
                    m.sub_row_multiple(i, c, &f);
                }
            }
        }
        det
    }
}

fn kernel_from_rref(r: &RationalMatrix, pivots: &[usize]) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..r.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); r.cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, f).clone();
            }
            v
        })
        .collect()
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.try_mul(rhs).expect("matrix dimensions")
    }
}

/// Solve `M x = b` exactly.
///
/// Returns one solution together with a kernel basis, or an inconsistency
/// certificate `y` satisfying `y M = 0` and `y b != 0`.
pub fn solve_linear(m: &RationalMatrix, b: &[Rational]) -> Result<LinearSolution> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows
        )));
    }
    let mut aug = RationalMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, m.cols, b[i].clone());
    }
    let mut track = RationalMatrix::identity(m.rows);
    let pivots = aug.rref_in_place(Some(&mut track));
    if let Some(pos) = pivots.iter().position(|&c| c == m.cols) {
        return Ok(LinearSolution::Inconsistent { certificate: track.row(pos).to_vec() });
    }
    let mut particular = vec![Rational::zero(); m.cols];
    for (row, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug.get(row, m.cols).clone();
    }
    let mut coeff = RationalMatrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            coeff.set(i, j, aug.get(i, j).clone());
        }
    }
    let kernel = kernel_from_rref(&coeff, &pivots);
    Ok(LinearSolution::Solved { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, ratio};
    use proptest::prelude::*;

    fn hilbert(n: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, ratio(1, (i + j + 1) as i64));
            }
        }
        m
    }

    #[test]
    fn identity_solve() {
        let b = vec![rat(3), ratio(-1, 2)];
        let sol = solve_linear(&RationalMatrix::identity(2), &b).unwrap();
        assert_eq!(sol.particular().unwrap(), &b[..]);
    }

    #[test]
    fn underdetermined_has_kernel() {
        let m = RationalMatrix::from_ints(1, 2, &[1, 1]);
        match solve_linear(&m, &[rat(1)]).unwrap() {
            LinearSolution::Solved { particular, kernel } => {
                assert_eq!(m.mul_vec(&particular).unwrap(), vec![rat(1)]);
                assert_eq!(kernel.len(), 1);
                assert_eq!(m.mul_vec(&kernel[0]).unwrap(), vec![rat(0)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hilbert_three() {
        // Frozen from exact elimination: H3^{-1} e1 = (9, -36, 30).
        let sol = solve_linear(&hilbert(3), &[rat(1), rat(0), rat(0)]).unwrap();
        assert_eq!(sol.particular().unwrap(), &[rat(9), rat(-36), rat(30)]);
    }

    #[test]
    fn inconsistent_certificate() {
        let m = RationalMatrix::from_ints(2, 2, &[1, 2, 2, 4]);
        let b = [rat(1), rat(3)];
        match solve_linear(&m, &b).unwrap() {
            LinearSolution::Inconsistent { certificate } => {
                let ym = m.transpose().mul_vec(&certificate).unwrap();
                assert!(ym.iter().all(Zero::is_zero));
                let yb: Rational = certificate.iter().zip(&b).map(|(y, b)| y * b).sum();
                assert!(!yb.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        assert!(solve_linear(&RationalMatrix::identity(2), &[rat(1)]).is_err());
    }

    #[test]
    fn inverse_and_determinant() {
        let h = hilbert(4);
        let inv = h.inverse().unwrap();
        assert!((&h * &inv).is_identity());
        assert_eq!(h.determinant(), ratio(1, 6048000));
    }

    proptest! {
        #[test]
        fn solutions_and_kernels_are_exact(
            entries in prop::collection::vec(-4i64..=4, 12),
            rhs in prop::collection::vec(-4i64..=4, 3),
        ) {
            let m = RationalMatrix::from_ints(3, 4, &entries);
            let b: Vec<Rational> = rhs.iter().map(|&x| rat(x)).collect();
            match solve_linear(&m, &b).unwrap() {
                LinearSolution::Solved { particular, kernel } => {
                    prop_assert_eq!(m.mul_vec(&particular).unwrap(), b);
                    prop_assert_eq!(kernel.len(), 4 - m.rank());
                    for k in kernel {
                        prop_assert!(m.mul_vec(&k).unwrap().iter().all(Zero::is_zero));
                    }
                }
                LinearSolution::Inconsistent { certificate } => {
                    prop_assert!(m.transpose().mul_vec(&certificate).unwrap().iter().all(Zero::is_zero));
                    let yb: Rational = certificate.iter().zip(&b).map(|(y, b)| y * b).sum();
                    prop_assert!(!yb.is_zero());
                }
            }
        }
    }
}
