//! End-to-end explicit isomorphisms `A -> M_d(Q)`, test instances and
//! certificate verification.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::amitsur::{trivial_matrix_iso, twist_by_cochain, Cocycle2};
use crate::arithmetic::{divisor_of, supported_above, trivialize_coboundary, ArithmeticOptions, Trivialisation};
use crate::csa::{generator_matrix, min_poly, present, AmitsurPresentation, PresentOptions, RngSeed, StructureConstantAlgebra};
use crate::error::{Error, Result};
use crate::etale::{delta, is_cocycle, TensorElement};
use crate::exact::{Rational, RationalMatrix};

/// Options for [`explicit_isomorphism`].
#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub present: PresentOptions,
    pub arithmetic: ArithmeticOptions,
}

impl PipelineOptions {
    /// Options sharing one discriminant bound.
    pub fn with_max_disc(max_disc: BigInt) -> Self {
        PipelineOptions {
            present: PresentOptions { max_disc: max_disc.clone(), ..Default::default() },
            arithmetic: ArithmeticOptions { max_disc, bach_bound: false },
        }
    }
}

/// An explicit isomorphism `A -> M_d(Q)` with the data it was built from.
///
/// `map` sends `A`-coordinates to the row-major entries of a `d x d`
/// matrix. `trivialisation.cochain` is a level-1 unit `a` with
/// `delta(a) = c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphismCertificate {
    #[serde(rename = "A")]
    pub algebra: StructureConstantAlgebra,
    pub d: usize,
    pub map: RationalMatrix,
    pub presentation: AmitsurPresentation,
    pub trivialisation: Trivialisation,
}

/// `x -> trivial_matrix_iso(e^{-1}(x) a)` as a `d^2 x d^2` matrix.
fn compose_map(pres: &AmitsurPresentation, a: &TensorElement) -> Result<RationalMatrix> {
    let alg = pres.algebra();
    let d = alg.degree();
    let n = d * d;
    let einv = pres
        .e
        .inverse()
        .ok_or_else(|| Error::SingularSystem("presentation map is not invertible".into()))?;
    let ainv = a.inv()?;
    let mut map = RationalMatrix::zeros(n, n);
    for k in 0..n {
        let m = TensorElement::new(alg, 1, einv.column(k))?;
        // twisting by a^{-1} moves A(F, c) to A(F, c delta(a)^{-1}) = A(F, 1)
        let y = twist_by_cochain(&m, &ainv)?;
        let mat = trivial_matrix_iso(&y)?;
        for r in 0..d {
            for s in 0..d {
                map.set(r * d + s, k, mat.get(r, s).clone());
            }
        }
    }
    Ok(map)
}

/// Present `A`, trivialise its cocycle and compose the resulting maps.
pub fn explicit_isomorphism(
    a: &StructureConstantAlgebra,
    seed: RngSeed,
    options: &PipelineOptions,
) -> Result<IsomorphismCertificate> {
    let d = a
        .degree()
        .ok_or_else(|| Error::DimensionMismatch(format!("dimension {} is not a square", a.dim())))?;
    let presentation = present(a, seed, &options.present)?;
    let trivialisation = trivialize_coboundary(&presentation.c, &options.arithmetic)?;
    IsomorphismCertificate::assemble(a.clone(), d, presentation, trivialisation)
}

impl IsomorphismCertificate {
    /// Compose the map from a presentation and a trivialisation of its
    /// cocycle.
    pub fn assemble(
        algebra: StructureConstantAlgebra,
        d: usize,
        presentation: AmitsurPresentation,
        trivialisation: Trivialisation,
    ) -> Result<Self> {
        let map = compose_map(&presentation, &trivialisation.cochain)?;
        Ok(IsomorphismCertificate { algebra, d, map, presentation, trivialisation })
    }
}

/// Whether [`generate_instance`] also returns a split generator `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    SplitU,
    #[default]
    None,
}

impl FromStr for Witness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split-u" => Ok(Witness::SplitU),
            "none" => Ok(Witness::None),
            _ => Err(Error::Malformed(format!("unknown witness {s:?} (expected split-u or none)"))),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Witness::SplitU => "split-u",
            Witness::None => "none",
        })
    }
}

/// A generated test algebra and, optionally, a split generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(rename = "A")]
    pub algebra: StructureConstantAlgebra,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational_vec")]
    pub witness_u: Option<Vec<Rational>>,
}

mod opt_rational_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact::rational::{format_rational, parse_rational};
    use crate::exact::Rational;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|xs| xs.iter().map(format_rational).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        let raw: Option<Vec<String>> = Option::deserialize(d)?;
        raw.map(|xs| xs.iter().map(|x| parse_rational(x).map_err(serde::de::Error::custom)).collect())
            .transpose()
    }
}

fn random_nonsingular(rng: &mut impl Rng, n: usize) -> RationalMatrix {
    loop {
        let entries: Vec<Rational> = (0..n * n).map(|_| Rational::from_integer(rng.gen_range(-3i64..=3).into())).collect();
        let g = RationalMatrix::from_entries(n, n, entries).expect("square entries");
        if !g.determinant().is_zero() {
            return g;
        }
    }
}

/// `M_d(Q)` in the basis given by the columns of a seeded random
/// nonsingular integer matrix with entries in `-3..=3`. With
/// [`Witness::SplitU`] the image of `diag(0, 1, ..., d - 1)` is attached.
pub fn generate_instance(d: usize, seed: RngSeed, witness: Witness) -> Result<Instance> {
    if d == 0 {
        return Err(Error::DimensionMismatch("degree must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let n = d * d;
    let g = random_nonsingular(&mut rng, n);
    let algebra = StructureConstantAlgebra::matrix_algebra(d).change_basis(&g)?;
    let witness_u = match witness {
        Witness::None => None,
        Witness::SplitU => {
            let mut diag = vec![Rational::zero(); n];
            for i in 0..d {
                diag[i * d + i] = Rational::from_integer(BigInt::from(i));
            }
            let gi = g.inverse().expect("nonsingular by construction");
            Some(gi.mul_vec(&diag)?)
        }
    };
    Ok(Instance { algebra, witness_u })
}

/// Outcome of one verification check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn run_check(name: &str, f: impl FnOnce() -> Result<bool>) -> Check {
    match f() {
        Ok(passed) => Check { name: name.into(), passed, detail: None },
        Err(e) => Check { name: name.into(), passed: false, detail: Some(e.to_string()) },
    }
}

fn matrix_of(map: &RationalMatrix, x: &[Rational], d: usize) -> Result<RationalMatrix> {
    RationalMatrix::from_entries(d, d, map.mul_vec(x)?)
}

fn cochain_matches(cert: &IsomorphismCertificate) -> Result<&Cocycle2> {
    let c = &cert.presentation.c;
    if c.algebra().as_ref() != cert.trivialisation.cochain.algebra().as_ref() {
        return Err(Error::LevelMismatch("cocycle and cochain live over different algebras".into()));
    }
    Ok(c)
}

/// Re-check every invariant of a certificate.
pub fn verify(cert: &IsomorphismCertificate) -> VerificationReport {
    let a = &cert.algebra;
    let d = cert.d;
    let n = a.dim();
    let mut checks = Vec::new();
    checks.push(run_check("degree", || Ok(a.degree() == Some(d) && cert.map.rows == n && cert.map.cols == n)));
    checks.push(run_check("cocycle", || {
        let c = cert.presentation.c.value();
        Ok(c.level() == 2 && is_cocycle(c)?)
    }));
    checks.push(run_check("generator", || {
        let p = &cert.presentation;
        // the first column of e is v itself
        Ok(min_poly(&p.u, a)? == p.p && generator_matrix(a, &p.u, &p.e.column(0))? == p.e)
    }));
    checks.push(run_check("presentation", || cert.presentation.check_homomorphism(a)));
    checks.push(run_check("delta", || {
        let c = cochain_matches(cert)?;
        let t = &cert.trivialisation.cochain;
        Ok(t.level() == 1 && delta(t)? == *c.value())
    }));
    checks.push(run_check("s_unit_support", || {
        let s: BTreeSet<BigInt> = cert.trivialisation.primes.iter().cloned().collect();
        Ok(supported_above(&divisor_of(&cert.trivialisation.cochain)?, &s))
    }));
    checks.push(run_check("map_composition", || {
        cochain_matches(cert)?;
        Ok(compose_map(&cert.presentation, &cert.trivialisation.cochain)? == cert.map)
    }));
    checks.push(run_check("homomorphism", || {
        let images: Vec<RationalMatrix> =
            (0..n).map(|i| matrix_of(&cert.map, &a.basis_vector(i), d)).collect::<Result<_>>()?;
        for i in 0..n {
            for j in 0..n {
                let lhs = matrix_of(&cert.map, &a.mul(&a.basis_vector(i), &a.basis_vector(j))?, d)?;
                if lhs != images[i].try_mul(&images[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }));
    checks.push(run_check("unit", || Ok(matrix_of(&cert.map, a.unit(), d)?.is_identity())));
    checks.push(run_check("invertible", || {
        let inv = cert.map.inverse().ok_or_else(|| Error::SingularSystem("map is singular".into()))?;
        Ok(inv.try_mul(&cert.map)?.is_identity() && cert.map.try_mul(&inv)?.is_identity())
    }));
    let passed = checks.iter().all(|c| c.passed);
    VerificationReport { passed, checks }
}

/// `A`-coordinates of the preimage of a `d x d` matrix (row-major).
pub fn preimage(cert: &IsomorphismCertificate, m: &[Rational]) -> Result<Vec<Rational>> {
    let inv = cert.map.inverse().ok_or_else(|| Error::SingularSystem("map is singular".into()))?;
    inv.mul_vec(m)
}

/// The unit of `M_d(Q)` in row-major coordinates.
pub fn identity_entries(d: usize) -> Vec<Rational> {
    (0..d * d).map(|k| if k / d == k % d { Rational::one() } else { Rational::zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Polynomial;

    fn opts_with(u: Option<Vec<Rational>>) -> PipelineOptions {
        let mut o = PipelineOptions::default();
        o.present.witness_u = u;
        o
    }

    #[test]
    fn matrix_units_split() {
        let a = StructureConstantAlgebra::matrix_algebra(2);
        let cert = explicit_isomorphism(&a, RngSeed(0), &PipelineOptions::default()).unwrap();
        let report = verify(&cert);
        assert!(report.passed, "{report:?}");
        assert_eq!(preimage(&cert, &identity_entries(2)).unwrap(), a.unit());
    }

    #[test]
    fn degree_one_is_trivial() {
        let inst = generate_instance(1, RngSeed(3), Witness::None).unwrap();
        assert_eq!(inst.algebra.dim(), 1);
        let cert = explicit_isomorphism(&inst.algebra, RngSeed(0), &PipelineOptions::default()).unwrap();
        assert!(verify(&cert).passed);
    }

    #[test]
    fn witness_is_split() {
        for d in 2..=3 {
            let inst = generate_instance(d, RngSeed(11), Witness::SplitU).unwrap();
            let u = inst.witness_u.unwrap();
            let p = min_poly(&u, &inst.algebra).unwrap();
            let expected = (0..d as i64).fold(Polynomial::from_ints(&[1]), |acc, i| {
                &acc * &Polynomial::from_ints(&[-i, 1])
            });
            assert_eq!(p, expected);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_instance(2, RngSeed(7), Witness::None).unwrap();
        let b = generate_instance(2, RngSeed(7), Witness::None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.algebra.dim(), 4);
    }

    #[test]
    fn conjugated_degree_three_with_witness() {
        let inst = generate_instance(3, RngSeed(1), Witness::SplitU).unwrap();
        let cert = explicit_isomorphism(&inst.algebra, RngSeed(1), &opts_with(inst.witness_u)).unwrap();
        assert!(verify(&cert).passed);
    }

    #[test]
    fn quaternions_are_not_split() {
        let h = StructureConstantAlgebra::hamilton_quaternions();
        let r = explicit_isomorphism(&h, RngSeed(0), &PipelineOptions::default());
        assert!(matches!(r, Err(Error::NotACoboundary(_))), "{r:?}");
    }

    #[test]
    fn perturbed_map_is_rejected() {
        let a = StructureConstantAlgebra::matrix_algebra(2);
        let mut cert = explicit_isomorphism(&a, RngSeed(2), &PipelineOptions::default()).unwrap();
        let v = cert.map.get(1, 2) + Rational::one();
        cert.map.set(1, 2, v);
        let report = verify(&cert);
        assert!(!report.passed);
        assert!(!report.check("map_composition").unwrap().passed);
    }

    #[test]
    fn certificate_json_roundtrip() {
        let a = StructureConstantAlgebra::matrix_algebra(2);
        let cert = explicit_isomorphism(&a, RngSeed(4), &PipelineOptions::default()).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        let back: IsomorphismCertificate = serde_json::from_str(&json).unwrap();
        assert!(verify(&back).passed);
        assert_eq!(back, cert);
    }
}
