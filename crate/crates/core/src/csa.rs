//! Structure-constant algebras and their presentation as Amitsur algebras.
//!
//! `present` finds a separable element `u` of degree `d` (so `F = Q[u]` is a
//! maximal étale subalgebra), a generator `v` with `A = F v F`, and the
//! unique cocycle `c` making `u^i (x) u^j -> u^i v u^j` an isomorphism
//! `A(F, c) -> A`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::amitsur::{amitsur_mul, Cocycle2};
use crate::error::{Error, Result};
use crate::etale::{trace_r2_r1, EtaleAlgebra, TensorElement};
use crate::exact::integer::squarefree_decomposition;
use crate::exact::poly::quadratic_discriminant;
use crate::exact::rational::{parse_rational, serde_rational_vec};
use crate::exact::{
    format_rational, is_separable, poly_factor, solve_linear, LinearSolution, Polynomial, Rational, RationalMatrix,
};

/// A finite-dimensional associative unital algebra over `Q` given by
/// `b_i b_j = sum_k table[i][j][k] b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstantAlgebra {
    dim: usize,
    basis: Vec<String>,
    table: Vec<Rational>,
    unit: Vec<Rational>,
}

impl StructureConstantAlgebra {
    /// Validates sizes, associativity on all basis triples, and the unit.
    pub fn new(basis: Vec<String>, table: Vec<Rational>) -> Result<Self> {
        let m = basis.len();
        if m == 0 || table.len() != m * m * m {
            return Err(Error::DimensionMismatch(format!(
                "table of {} entries for dimension {m}",
                table.len()
            )));
        }
        let mut a = StructureConstantAlgebra { dim: m, basis, table, unit: Vec::new() };
        a.check_associative()?;
        a.unit = a.find_unit()?;
        Ok(a)
    }

    /// The algebra of `d x d` matrices in the matrix-unit basis `E_ij`
    /// (row-major).
    pub fn matrix_algebra(d: usize) -> Self {
        let m = d * d;
        let mut table = vec![Rational::zero(); m * m * m];
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    table[((i * d + j) * m + (j * d + l)) * m + i * d + l] = Rational::one();
                }
            }
        }
        let basis = (0..m).map(|k| format!("E{}{}", k / d + 1, k % d + 1)).collect();
        Self::new(basis, table).expect("matrix units form an algebra")
    }

    /// Rational Hamilton quaternions `(-1, -1)_Q` in the basis `1, i, j, k`.
    pub fn hamilton_quaternions() -> Self {
        // (index of product, sign) for b_r * b_s
        let signs: [[(usize, i64); 4]; 4] = [
            [(0, 1), (1, 1), (2, 1), (3, 1)],
            [(1, 1), (0, -1), (3, 1), (2, -1)],
            [(2, 1), (3, -1), (0, -1), (1, 1)],
            [(3, 1), (2, 1), (1, -1), (0, -1)],
        ];
        let mut table = vec![Rational::zero(); 64];
        for r in 0..4 {
            for s in 0..4 {
                let (k, sg) = signs[r][s];
                table[(r * 4 + s) * 4 + k] = Rational::from_integer(sg.into());
            }
        }
        let basis = ["1", "i", "j", "k"].iter().map(|s| s.to_string()).collect();
        Self::new(basis, table).expect("quaternions form an algebra")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.table[(i * self.dim + j) * self.dim + k]
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    /// `d` with `dim = d^2`, if the dimension is a square.
    pub fn degree(&self) -> Option<usize> {
        let d = (self.dim as f64).sqrt().round() as usize;
        (d * d == self.dim).then_some(d)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    fn mul_unchecked(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let m = self.dim;
        let mut out = vec![Rational::zero(); m];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                let row = &self.table[(i * m + j) * m..(i * m + j + 1) * m];
                for (k, t) in row.iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &c * t;
                    }
                }
            }
        }
        out
    }

    fn check_associative(&self) -> Result<()> {
        let m = self.dim;
        for i in 0..m {
            for j in 0..m {
                let bij = self.mul_unchecked(&self.basis_vector(i), &self.basis_vector(j));
                for k in 0..m {
                    let bk = self.basis_vector(k);
                    let lhs = self.mul_unchecked(&bij, &bk);
                    let bjk = self.mul_unchecked(&self.basis_vector(j), &bk);
                    let rhs = self.mul_unchecked(&self.basis_vector(i), &bjk);
                    if lhs != rhs {
                        return Err(Error::NotAssociative(format!(
                            "({} {}) {} differs from {} ({} {})",
                            self.basis[i], self.basis[j], self.basis[k], self.basis[i], self.basis[j], self.basis[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn find_unit(&self) -> Result<Vec<Rational>> {
        let m = self.dim;
        // unknown u: rows for u b_j = b_j and b_j u = b_j
        let mut mat = RationalMatrix::zeros(2 * m * m, m);
        let mut rhs = Vec::with_capacity(2 * m * m);
        for j in 0..m {
            for k in 0..m {
                for i in 0..m {
                    mat.set(j * m + k, i, self.structure_constant(i, j, k).clone());
                    mat.set(m * m + j * m + k, i, self.structure_constant(j, i, k).clone());
                }
            }
        }
        for _ in 0..2 {
            for j in 0..m {
                rhs.extend(self.basis_vector(j));
            }
        }
        match solve_linear(&mat, &rhs)? {
            LinearSolution::Solved { particular, .. } => Ok(particular),
            LinearSolution::Inconsistent { .. } => Err(Error::NoUnit),
        }
    }

    /// Product `x y`.
    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} and {} in dimension {}",
                x.len(),
                y.len(),
                self.dim
            )));
        }
        Ok(self.mul_unchecked(x, y))
    }

    /// `x^0, ..., x^(k-1)`.
    fn powers(&self, x: &[Rational], k: usize) -> Vec<Vec<Rational>> {
        let mut out = vec![self.unit.clone()];
        for i in 1..k {
            out.push(self.mul_unchecked(&out[i - 1], x));
        }
        out
    }

    /// The same algebra in the basis given by the columns of `g` (old
    /// coordinates).
    pub fn change_basis(&self, g: &RationalMatrix) -> Result<Self> {
        let m = self.dim;
        let gi = g
            .inverse()
            .ok_or_else(|| Error::SingularSystem("basis change is singular".into()))?;
        let cols: Vec<Vec<Rational>> = (0..m).map(|j| g.column(j)).collect();
        let mut table = vec![Rational::zero(); m * m * m];
        for i in 0..m {
            for j in 0..m {
                let p = self.mul_unchecked(&cols[i], &cols[j]);
                let q = gi.mul_vec(&p)?;
                table[(i * m + j) * m..(i * m + j + 1) * m].clone_from_slice(&q);
            }
        }
        Self::new(self.basis.clone(), table)
    }
}

/// `sum x_i y_j table[i][j][.]`.
pub fn sc_mul(x: &[Rational], y: &[Rational], a: &StructureConstantAlgebra) -> Result<Vec<Rational>> {
    a.mul(x, y)
}

/// Monic minimal polynomial of `x`.
pub fn min_poly(x: &[Rational], a: &StructureConstantAlgebra) -> Result<Polynomial> {
    if x.len() != a.dim {
        return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {}", x.len(), a.dim)));
    }
    let mut powers = vec![a.unit.clone()];
    loop {
        let k = powers.len();
        let next = a.mul_unchecked(&powers[k - 1], x);
        let mat = RationalMatrix::from_columns(&powers)?;
        if let LinearSolution::Solved { particular, .. } = solve_linear(&mat, &next)? {
            let mut coeffs: Vec<Rational> = particular.into_iter().map(|c| -c).collect();
            coeffs.push(Rational::one());
            return Ok(Polynomial::new(coeffs));
        }
        powers.push(next);
    }
}

/// Absolute value of the fundamental discriminant of the field generated by
/// a root of the irreducible quadratic `f`.
pub fn quadratic_field_discriminant(f: &Polynomial) -> Option<BigInt> {
    let disc = quadratic_discriminant(f)?;
    let (s, _) = squarefree_decomposition(&(disc.numer() * disc.denom()));
    let four = BigInt::from(4);
    let m = ((&s % &four) + &four) % &four;
    Some(if m.is_one() { s } else { s * four })
}

/// Seed for the deterministic random stream used by the randomised steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Tunables for [`present`].
#[derive(Clone, Debug)]
pub struct PresentOptions {
    /// Retry cap for each randomised search; `None` means `16 (dim + 1)`.
    pub max_tries: Option<usize>,
    /// Bound on `|disc|` of quadratic components of `Q[u]`.
    pub max_disc: BigInt,
    /// Use this element as `u` instead of searching.
    pub witness_u: Option<Vec<Rational>>,
}

impl Default for PresentOptions {
    fn default() -> Self {
        PresentOptions { max_tries: None, max_disc: BigInt::from(1_000_000), witness_u: None }
    }
}

impl PresentOptions {
    fn tries(&self, a: &StructureConstantAlgebra) -> usize {
        self.max_tries.unwrap_or(16 * (a.dim + 1))
    }
}

fn random_vector(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m).map(|_| Rational::from_integer(rng.gen_range(0..=m as i64).into())).collect()
}

fn require_square(a: &StructureConstantAlgebra) -> Result<usize> {
    a.degree()
        .ok_or_else(|| Error::DimensionMismatch(format!("dimension {} is not a square", a.dim)))
}

/// Largest `|disc|` among quadratic factors of `p`.
fn largest_quadratic_discriminant(p: &Polynomial) -> BigInt {
    poly_factor(p)
        .iter()
        .filter_map(|(f, _)| quadratic_field_discriminant(f))
        .map(|d| d.abs())
        .max()
        .unwrap_or_default()
}

/// Random `u` whose minimal polynomial is separable of degree `d`, with
/// quadratic components inside the discriminant bound.
pub fn find_maximal_etale(
    a: &StructureConstantAlgebra,
    rng: &mut ChaCha8Rng,
    options: &PresentOptions,
) -> Result<(Vec<Rational>, Polynomial)> {
    let d = require_square(a)?;
    if d == 1 {
        return Ok((a.unit.clone(), Polynomial::from_ints(&[-1, 1])));
    }
    let mut smallest_rejected: Option<BigInt> = None;
    for _ in 0..options.tries(a) {
        let u = random_vector(rng, a.dim);
        let p = min_poly(&u, a)?;
        if p.degree() != Some(d) || !is_separable(&p)? {
            continue;
        }
        let disc = largest_quadratic_discriminant(&p);
        if disc > options.max_disc {
            if smallest_rejected.as_ref().map_or(true, |s| &disc < s) {
                smallest_rejected = Some(disc);
            }
            continue;
        }
        return Ok((u, p));
    }
    match smallest_rejected {
        Some(disc) => Err(Error::DiscriminantTooLarge { disc: disc.to_string(), bound: options.max_disc.to_string() }),
        None => Err(Error::MaxTriesExceeded(format!(
            "no separable element of degree {d} in {} samples",
            options.tries(a)
        ))),
    }
}

/// Matrix with columns `u^i v u^j`, `(i, j)` in lexicographic order.
pub fn generator_matrix(a: &StructureConstantAlgebra, u: &[Rational], v: &[Rational]) -> Result<RationalMatrix> {
    let d = require_square(a)?;
    let pw = a.powers(u, d);
    let mut cols = Vec::with_capacity(a.dim);
    for ui in &pw {
        let left = a.mul(ui, v)?;
        for uj in &pw {
            cols.push(a.mul_unchecked(&left, uj));
        }
    }
    RationalMatrix::from_columns(&cols)
}

/// Whether a single sample of `v` gives `A = F v F`.
pub fn is_generator(a: &StructureConstantAlgebra, u: &[Rational], v: &[Rational]) -> Result<bool> {
    Ok(generator_matrix(a, u, v)?.rank() == a.dim)
}

/// Random `v` with `A = F v F`, returned with its matrix `e`.
pub fn find_generator_v(
    a: &StructureConstantAlgebra,
    u: &[Rational],
    rng: &mut ChaCha8Rng,
    options: &PresentOptions,
) -> Result<(Vec<Rational>, RationalMatrix)> {
    for _ in 0..options.tries(a) {
        let v = random_vector(rng, a.dim);
        let e = generator_matrix(a, u, &v)?;
        if e.rank() == a.dim {
            return Ok((v, e));
        }
    }
    Err(Error::MaxTriesExceeded(format!("no bimodule generator in {} samples", options.tries(a))))
}

/// The output `(u, P, c, e)` of the presentation algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmitsurPresentation {
    #[serde(with = "serde_rational_vec")]
    pub u: Vec<Rational>,
    #[serde(rename = "P")]
    pub p: Polynomial,
    pub c: Cocycle2,
    pub e: RationalMatrix,
}

impl AmitsurPresentation {
    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        self.c.algebra()
    }

    /// `e(x)`: coordinates in `A` of a level-1 element.
    pub fn embed(&self, x: &TensorElement) -> Result<Vec<Rational>> {
        self.e.mul_vec(x.coeffs())
    }

    /// Checks the homomorphism identity `e(x y) = e(x) e(y)` on all basis
    /// pairs of `A(F, c)`.
    pub fn check_homomorphism(&self, a: &StructureConstantAlgebra) -> Result<bool> {
        let alg = self.algebra();
        let d = alg.degree();
        let basis: Vec<TensorElement> =
            (0..d * d).map(|k| TensorElement::monomial(alg, &[k / d, k % d])).collect();
        let images: Vec<Vec<Rational>> = basis.iter().map(|b| self.embed(b)).collect::<Result<_>>()?;
        for (x, ex) in basis.iter().zip(&images) {
            for (y, ey) in basis.iter().zip(&images) {
                let lhs = self.embed(&amitsur_mul(x, y, &self.c)?)?;
                if lhs != a.mul(ex, ey)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Solves for the unique `c` with `e(x *_c y) = e(x) e(y)`.
pub fn compute_cocycle(
    a: &StructureConstantAlgebra,
    u: &[Rational],
    p: &Polynomial,
    e: &RationalMatrix,
) -> Result<AmitsurPresentation> {
    let d = require_square(a)?;
    if p.degree() != Some(d) {
        return Err(Error::DimensionMismatch(format!("minimal polynomial of degree {:?} for d = {d}", p.degree())));
    }
    let alg = EtaleAlgebra::new(p)?;
    let einv = e
        .inverse()
        .ok_or_else(|| Error::SingularSystem("generator matrix is not invertible".into()))?;
    let n2 = d * d;
    let n3 = n2 * d;
    // Constrain products with x = u^i (x) 1 and y = u^i' (x) u^j'. The
    // unknown enters as Tr(X_0^i X_1^i' X_2^j' c), linear in c.
    let mut mat = RationalMatrix::zeros(n3 * n2, n3);
    let mut rhs = Vec::with_capacity(n3 * n2);
    let monomials3: Vec<TensorElement> =
        (0..n3).map(|k| TensorElement::monomial(&alg, &[k / n2, (k / d) % d, k % d])).collect();
    for (row_block, m) in monomials3.iter().enumerate() {
        let (i, ip, jp) = (row_block / n2, (row_block / d) % d, row_block % d);
        for (col, c) in monomials3.iter().enumerate() {
            let t = trace_r2_r1(&m.mul(c)?)?;
            for (r, v) in t.coeffs().iter().enumerate() {
                if !v.is_zero() {
                    mat.set(row_block * n2 + r, col, v.clone());
                }
            }
        }
        let x = TensorElement::monomial(&alg, &[i, 0]);
        let y = TensorElement::monomial(&alg, &[ip, jp]);
        let target = a.mul(&e.mul_vec(x.coeffs())?, &e.mul_vec(y.coeffs())?)?;
        rhs.extend(einv.mul_vec(&target)?);
    }
    let c = match solve_linear(&mat, &rhs)? {
        LinearSolution::Solved { particular, kernel } if kernel.is_empty() => TensorElement::new(&alg, 2, particular)?,
        LinearSolution::Solved { kernel, .. } => {
            return Err(Error::SingularSystem(format!("cocycle system has a {}-dimensional kernel", kernel.len())))
        }
        LinearSolution::Inconsistent { .. } => {
            return Err(Error::SingularSystem("cocycle system is inconsistent".into()))
        }
    };
    let c = Cocycle2::new(c).map_err(|_| Error::InconsistentPresentation("solution is not a cocycle".into()))?;
    let pres = AmitsurPresentation { u: u.to_vec(), p: alg.polynomial().clone(), c, e: e.clone() };
    if !pres.check_homomorphism(a)? {
        return Err(Error::InconsistentPresentation("pulled-back product differs from A".into()));
    }
    Ok(pres)
}

/// Presentation of `A` as an Amitsur algebra, deterministic in the seed.
pub fn present(a: &StructureConstantAlgebra, seed: RngSeed, options: &PresentOptions) -> Result<AmitsurPresentation> {
    let mut rng = seed.rng();
    let d = require_square(a)?;
    let (u, p) = match &options.witness_u {
        Some(u) => {
            let p = min_poly(u, a)?;
            if p.degree() != Some(d) || !is_separable(&p)? {
                return Err(Error::Malformed("witness u does not generate a maximal étale subalgebra".into()));
            }
            (u.clone(), p)
        }
        None => find_maximal_etale(a, &mut rng, options)?,
    };
    let (_, e) = find_generator_v(a, &u, &mut rng, options)?;
    compute_cocycle(a, &u, &p, &e)
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    dim: usize,
    basis: Vec<String>,
    table: Vec<Vec<Vec<String>>>,
}

impl Serialize for StructureConstantAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = self.dim;
        let table = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..m).map(|k| format_rational(self.structure_constant(i, j, k))).collect())
                    .collect()
            })
            .collect();
        AlgebraRepr { dim: m, basis: self.basis.clone(), table }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StructureConstantAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = AlgebraRepr::deserialize(d)?;
        let m = r.dim;
        if r.basis.len() != m || r.table.len() != m {
            return Err(D::Error::custom(format!("table and basis must have dimension {m}")));
        }
        let mut table = Vec::with_capacity(m * m * m);
        for plane in &r.table {
            if plane.len() != m {
                return Err(D::Error::custom("ragged structure-constant table"));
            }
            for row in plane {
                if row.len() != m {
                    return Err(D::Error::custom("ragged structure-constant table"));
                }
                for s in row {
                    table.push(parse_rational(s).map_err(D::Error::custom)?);
                }
            }
        }
        StructureConstantAlgebra::new(r.basis, table).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etale::delta;
    use crate::exact::rat;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn matrix_units() {
        let m2 = StructureConstantAlgebra::matrix_algebra(2);
        assert_eq!(m2.unit(), v(&[1, 0, 0, 1]).as_slice());
        let e12 = v(&[0, 1, 0, 0]);
        let e21 = v(&[0, 0, 1, 0]);
        assert_eq!(sc_mul(&e12, &e21, &m2).unwrap(), v(&[1, 0, 0, 0]));
        assert_eq!(sc_mul(&e12, &e12, &m2).unwrap(), v(&[0, 0, 0, 0]));
        let y = v(&[3, -1, 2, 5]);
        assert_eq!(sc_mul(m2.unit(), &y, &m2).unwrap(), y);
        assert!(matches!(sc_mul(&e12, &v(&[1]), &m2), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn minimal_polynomials() {
        let m2 = StructureConstantAlgebra::matrix_algebra(2);
        assert_eq!(min_poly(m2.unit(), &m2).unwrap(), Polynomial::from_ints(&[-1, 1]));
        assert_eq!(min_poly(&v(&[0, 0, 0, 1]), &m2).unwrap(), Polynomial::from_ints(&[0, -1, 1]));
        assert_eq!(min_poly(&v(&[0, 1, 0, 0]), &m2).unwrap(), Polynomial::from_ints(&[0, 0, 1]));
        let h = StructureConstantAlgebra::hamilton_quaternions();
        assert_eq!(min_poly(&v(&[0, 1, 0, 0]), &h).unwrap(), Polynomial::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn rejects_bad_tables() {
        let mut t = StructureConstantAlgebra::matrix_algebra(2).table().to_vec();
        t[0] = rat(2);
        assert!(matches!(
            StructureConstantAlgebra::new((0..4).map(|i| i.to_string()).collect(), t),
            Err(Error::NotAssociative(_))
        ));
        let zero = vec![Rational::zero(); 8];
        assert_eq!(StructureConstantAlgebra::new(vec!["a".into(), "b".into()], zero), Err(Error::NoUnit));
    }

    #[test]
    fn maximal_etale_search() {
        let m2 = StructureConstantAlgebra::matrix_algebra(2);
        let mut rng = RngSeed(0).rng();
        let (u, p) = find_maximal_etale(&m2, &mut rng, &PresentOptions::default()).unwrap();
        assert_eq!(p.degree(), Some(2));
        assert!(is_separable(&p).unwrap());
        assert_eq!(min_poly(&u, &m2).unwrap(), p);

        let q = StructureConstantAlgebra::new(vec!["1".into()], vec![rat(1)]).unwrap();
        let (u, p) = find_maximal_etale(&q, &mut rng, &PresentOptions::default()).unwrap();
        assert_eq!((u, p), (v(&[1]), Polynomial::from_ints(&[-1, 1])));

        // Q^5 with idempotent basis: dimension is not a square
        let five = StructureConstantAlgebra::new(
            (0..5).map(|i| i.to_string()).collect(),
            (0..125).map(|k| if k % 31 == 0 { rat(1) } else { rat(0) }).collect(),
        )
        .unwrap();
        assert!(matches!(
            find_maximal_etale(&five, &mut rng, &PresentOptions::default()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn generator_acceptance() {
        let m2 = StructureConstantAlgebra::matrix_algebra(2);
        let u = v(&[0, 0, 0, 1]);
        assert!(is_generator(&m2, &u, &v(&[1, 1, 1, 1])).unwrap());
        assert!(!is_generator(&m2, &u, &v(&[0, 1, 1, 0])).unwrap());
    }

    #[test]
    fn trivial_cocycle_for_matrix_units() {
        let m2 = StructureConstantAlgebra::matrix_algebra(2);
        let u = v(&[0, 0, 0, 1]);
        let p = min_poly(&u, &m2).unwrap();
        let e = generator_matrix(&m2, &u, &v(&[1, 1, 1, 1])).unwrap();
        let pres = compute_cocycle(&m2, &u, &p, &e).unwrap();
        assert!(pres.c.value().is_one());
        assert!(delta(pres.c.value()).unwrap().is_one());
    }

    #[test]
    fn presentations_are_deterministic_and_valid() {
        for d in [2, 3] {
            let a = StructureConstantAlgebra::matrix_algebra(d);
            let p1 = present(&a, RngSeed(5), &PresentOptions::default()).unwrap();
            let p2 = present(&a, RngSeed(5), &PresentOptions::default()).unwrap();
            assert_eq!(serde_json::to_string(&p1).unwrap(), serde_json::to_string(&p2).unwrap());
            assert!(p1.check_homomorphism(&a).unwrap());
        }
        let h = StructureConstantAlgebra::hamilton_quaternions();
        let p = present(&h, RngSeed(1), &PresentOptions::default()).unwrap();
        assert!(p.check_homomorphism(&h).unwrap());
    }

    #[test]
    fn algebra_json_roundtrip() {
        let h = StructureConstantAlgebra::hamilton_quaternions();
        let s = serde_json::to_string(&h).unwrap();
        assert!(s.starts_with(r#"{"dim":4,"basis":["1","i","j","k"],"table":[[["1","0","0","0"]"#));
        let back: StructureConstantAlgebra = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
    }
}
