//! Splitting of tensor powers into field components.
//!
//! The roots of `P` are written symbolically as `a + b * sqrt(s)` with `s`
//! squarefree. Components of `R_n` correspond to Galois orbits of root
//! tuples `(theta_0, ..., theta_n)`; the projection onto a component is
//! evaluation at the orbit representative.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::integer::squarefree_decomposition;
use crate::exact::poly::quadratic_discriminant;
use crate::exact::{Polynomial, Rational, RationalMatrix};

/// A field component: `Q` or `Q(sqrt(radicand))` with squarefree radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ComponentField {
    Rational,
    Quadratic {
        #[serde(with = "bigint_string")]
        radicand: BigInt,
    },
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

/// `a + b * sqrt(s)` for the radicand `s` of the ambient component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    pub a: Rational,
    pub b: Rational,
}

impl FieldElement {
    pub fn rational(a: Rational) -> Self {
        FieldElement { a, b: Rational::zero() }
    }

    pub fn new(a: Rational, b: Rational) -> Self {
        FieldElement { a, b }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        FieldElement { a: self.a.clone(), b: -&self.b }
    }
}

impl ComponentField {
    pub fn degree(&self) -> usize {
        match self {
            ComponentField::Rational => 1,
            ComponentField::Quadratic { .. } => 2,
        }
    }

    fn radicand(&self) -> BigInt {
        match self {
            ComponentField::Rational => BigInt::one(),
            ComponentField::Quadratic { radicand } => radicand.clone(),
        }
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement { a: &x.a + &y.a, b: &x.b + &y.b }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let s = Rational::from_integer(self.radicand());
        FieldElement {
            a: &x.a * &y.a + &x.b * &y.b * s,
            b: &x.a * &y.b + &x.b * &y.a,
        }
    }

    pub fn norm(&self, x: &FieldElement) -> Rational {
        match self {
            ComponentField::Rational => x.a.clone(),
            ComponentField::Quadratic { radicand } => {
                &x.a * &x.a - &x.b * &x.b * Rational::from_integer(radicand.clone())
            }
        }
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        let n = self.norm(x);
        if n.is_zero() {
            return Err(Error::NonUnit);
        }
        Ok(match self {
            ComponentField::Rational => FieldElement::rational(n.recip()),
            ComponentField::Quadratic { .. } => FieldElement { a: &x.a / &n, b: -&x.b / &n },
        })
    }

    pub fn pow(&self, x: &FieldElement, e: i64) -> Result<FieldElement> {
        let mut base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = FieldElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Coordinates in the basis `(1, sqrt(s))`, truncated to the degree.
    pub fn coordinates(&self, x: &FieldElement) -> Vec<Rational> {
        match self {
            ComponentField::Rational => vec![x.a.clone()],
            ComponentField::Quadratic { .. } => vec![x.a.clone(), x.b.clone()],
        }
    }
}

impl fmt::Display for ComponentField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentField::Rational => write!(f, "Q"),
            ComponentField::Quadratic { radicand } => write!(f, "Q(sqrt({radicand}))"),
        }
    }
}

/// A root of `P` as `re + im * sqrt(radicand)`; `radicand = 1` and `im = 0`
/// for rational roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub re: Rational,
    pub im: Rational,
    pub radicand: BigInt,
    /// Index of the other root of the same quadratic factor (self for
    /// rational roots).
    pub conjugate: usize,
}

impl Root {
    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }
}

/// Roots of the product of the given monic irreducible factors, in factor
/// order, `+` before `-` for quadratic factors.
pub(crate) fn roots_of_factors(factors: &[Polynomial]) -> Result<Vec<Root>> {
    let mut roots = Vec::new();
    for f in factors {
        match f.degree() {
            Some(1) => {
                let idx = roots.len();
                roots.push(Root {
                    re: -f.coeff(0),
                    im: Rational::zero(),
                    radicand: BigInt::one(),
                    conjugate: idx,
                });
            }
            Some(2) => {
                let disc = quadratic_discriminant(f).unwrap();
                let (num, den) = (disc.numer().clone(), disc.denom().clone());
                let (s, sq) = squarefree_decomposition(&(num * &den));
                let re = -f.coeff(1) / Rational::from_integer(BigInt::from(2));
                let im = Rational::new(sq, den * 2);
                let idx = roots.len();
                roots.push(Root { re: re.clone(), im: im.clone(), radicand: s.clone(), conjugate: idx + 1 });
                roots.push(Root { re, im: -im, radicand: s, conjugate: idx });
            }
            Some(k) => return Err(Error::UnsupportedDegree(k)),
            None => unreachable!("factors are nonzero"),
        }
    }
    Ok(roots)
}

/// One field component of `R_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Orbit representative: indices into the root list.
    pub tuple: Vec<usize>,
    pub field: ComponentField,
}

/// All components of `R_n` with the joint projection and its inverse.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub level: usize,
    pub components: Vec<Component>,
    /// Row block `k` holds the coordinates of component `k` as linear forms
    /// in the monomial coefficients.
    pub projection: RationalMatrix,
    pub lift: RationalMatrix,
    offsets: Vec<usize>,
    lookup: HashMap<Vec<usize>, (usize, bool)>,
}

fn conjugate_tuple(roots: &[Root], t: &[usize]) -> Vec<usize> {
    t.iter().map(|&i| roots[i].conjugate).collect()
}

fn tuples(r: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..r).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

impl Splitting {
    pub(crate) fn compute(roots: &[Root], level: usize) -> Result<Self> {
        let d = roots.len();
        let n1 = level + 1;
        let size = d.pow(n1 as u32);
        let mut components = Vec::new();
        for t in tuples(d, n1) {
            let radicands: BTreeSet<&BigInt> =
                t.iter().filter(|&&i| !roots[i].is_rational()).map(|&i| &roots[i].radicand).collect();
            match radicands.len() {
                0 => components.push(Component { tuple: t, field: ComponentField::Rational }),
                1 => {
                    let radicand = (*radicands.iter().next().unwrap()).clone();
                    if t <= conjugate_tuple(roots, &t) {
                        components.push(Component { tuple: t, field: ComponentField::Quadratic { radicand } });
                    }
                }
                _ => return Err(Error::UnsupportedDegree(1 << radicands.len())),
            }
        }
        // powers of each root as field elements over its own radicand
        let powers: Vec<Vec<FieldElement>> = roots
            .iter()
            .map(|r| {
                let field = if r.is_rational() {
                    ComponentField::Rational
                } else {
                    ComponentField::Quadratic { radicand: r.radicand.clone() }
                };
                let x = FieldElement::new(r.re.clone(), r.im.clone());
                let mut v = vec![FieldElement::one()];
                for k in 1..d {
                    v.push(field.mul(&v[k - 1], &x));
                }
                v
            })
            .collect();
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(size);
        let mut offsets = Vec::with_capacity(components.len());
        let mut lookup = HashMap::new();
        for (ci, comp) in components.iter().enumerate() {
            offsets.push(rows.len());
            let mut a_row = Vec::with_capacity(size);
            let mut b_row = Vec::with_capacity(size);
            for idx in 0..size {
                let mut val = FieldElement::one();
                let mut rest = idx;
                for slot in (0..n1).rev() {
                    let e = rest % d;
                    rest /= d;
                    val = comp.field.mul(&val, &powers[comp.tuple[slot]][e]);
                }
                a_row.push(val.a);
                b_row.push(val.b);
            }
            rows.push(a_row);
            if comp.field.degree() == 2 {
                rows.push(b_row);
            }
            lookup.insert(comp.tuple.clone(), (ci, false));
            let conj = conjugate_tuple(roots, &comp.tuple);
            lookup.entry(conj).or_insert((ci, true));
        }
        let projection = RationalMatrix::from_rows(&rows)?;
        let lift = projection
            .inverse()
            .ok_or_else(|| Error::InvalidRoots("joint projection is singular".into()))?;
        Ok(Splitting { level, components, projection, lift, offsets, lookup })
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Images of a coefficient vector in every component.
    pub fn project(&self, coeffs: &[Rational]) -> Vec<FieldElement> {
        let coords = self.projection.mul_vec(coeffs).expect("projection dimensions");
        self.components
            .iter()
            .zip(&self.offsets)
            .map(|(c, &o)| match c.field.degree() {
                1 => FieldElement::rational(coords[o].clone()),
                _ => FieldElement::new(coords[o].clone(), coords[o + 1].clone()),
            })
            .collect()
    }

    /// Inverse of [`Splitting::project`].
    pub fn lift_values(&self, values: &[FieldElement]) -> Result<Vec<Rational>> {
        if values.len() != self.components.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} component values for {} components",
                values.len(),
                self.components.len()
            )));
        }
        let mut coords = Vec::with_capacity(self.projection.rows);
        for (c, v) in self.components.iter().zip(values) {
            coords.extend(c.field.coordinates(v));
        }
        self.lift.mul_vec(&coords)
    }

    /// Component containing the root tuple `t`, and whether `t` is the
    /// conjugate of its representative.
    pub fn locate(&self, t: &[usize]) -> Option<(usize, bool)> {
        self.lookup.get(t).copied()
    }
}

/// How one target component receives its source under a morphism
/// `R_n -> R_m` induced by a map of root-tuple slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComponentEmbedding {
    pub source: usize,
    /// The source field is embedded through its nontrivial automorphism.
    pub conjugate: bool,
}

/// Component matrix of `epsilon_i^n`: entry `k` describes the unique
/// source component mapping into target component `k`.
pub fn face_embeddings(source: &Splitting, target: &Splitting, i: usize) -> Vec<ComponentEmbedding> {
    target
        .components
        .iter()
        .map(|c| {
            let mut t = c.tuple.clone();
            t.remove(i);
            let (s, conj) = source.locate(&t).expect("face of a root tuple is a root tuple");
            // inclusion Q -> Q(sqrt s) never conjugates
            let conjugate = conj && source.components[s].field.degree() == 2;
            ComponentEmbedding { source: s, conjugate }
        })
        .collect()
}
