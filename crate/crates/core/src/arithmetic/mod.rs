//! Places, divisors, class groups and S-unit groups of étale algebras over
//! `Q` whose field components have degree at most two, the divisor-level
//! Amitsur complex, and the trivialisation of Amitsur 2-coboundaries.

pub mod quadratic;
mod trivialize;
mod units;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::etale::{face_embeddings, ComponentEmbedding, ComponentField, EtaleAlgebra, FieldElement, TensorElement};
use crate::exact::integer::{is_prime, prime_divisors, valuation_rational};
use crate::exact::rational::serde_bigint;

pub use quadratic::{ClassGroupData, PlaceKind, PrimeIdeal, QuadraticField, QuadraticSUnits, UnitData};
pub use trivialize::{component_delta, trivialize_coboundary, Trivialisation};
pub use units::{s_unit_group, solve_in_fg_abelian, FgAbelianGroup, SUnitGroup};

/// Scope limits for the class-group and unit computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithmeticOptions {
    /// Largest admissible `|disc|` of a quadratic component.
    pub max_disc: BigInt,
    /// Take class-group generators below `12 log^2 |disc|` instead of the
    /// Minkowski bound.
    pub bach_bound: bool,
}

impl Default for ArithmeticOptions {
    fn default() -> Self {
        ArithmeticOptions { max_disc: BigInt::from(1_000_000), bach_bound: false }
    }
}

/// Class group and units of one quadratic field.
#[derive(Debug)]
pub struct FieldData {
    pub field: QuadraticField,
    pub class: ClassGroupData,
    pub units: UnitData,
}

/// Per-radicand arithmetic data, computed on first use.
#[derive(Debug, Default)]
pub struct FieldCache {
    options: ArithmeticOptions,
    fields: HashMap<BigInt, Arc<FieldData>>,
}

impl FieldCache {
    pub fn new(options: &ArithmeticOptions) -> Self {
        FieldCache { options: options.clone(), fields: HashMap::new() }
    }

    pub fn options(&self) -> &ArithmeticOptions {
        &self.options
    }

    pub fn get(&mut self, radicand: &BigInt) -> Result<Arc<FieldData>> {
        if let Some(d) = self.fields.get(radicand) {
            return Ok(d.clone());
        }
        let field = QuadraticField::new(radicand)?;
        check_disc(&field, &self.options)?;
        let class = field.class_group(self.options.bach_bound);
        let units = field.units();
        let data = Arc::new(FieldData { field, class, units });
        self.fields.insert(radicand.clone(), data.clone());
        Ok(data)
    }
}

fn check_disc(field: &QuadraticField, options: &ArithmeticOptions) -> Result<()> {
    if field.discriminant().abs() > options.max_disc {
        return Err(Error::DiscriminantTooLarge {
            disc: field.discriminant().to_string(),
            bound: options.max_disc.to_string(),
        });
    }
    Ok(())
}

/// A finite place of `R_n`: a prime of one field component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    pub level: usize,
    pub component: usize,
    pub prime: BigInt,
    /// `None` on a rational component.
    pub kind: Option<PlaceKind>,
}

impl Place {
    pub fn rational(level: usize, component: usize, prime: BigInt) -> Self {
        Place { level, component, prime, kind: None }
    }

    pub fn quadratic(level: usize, component: usize, prime: BigInt, kind: PlaceKind) -> Self {
        Place { level, component, prime, kind: Some(kind) }
    }

    /// Checks primality and, on quadratic components, that the kind
    /// matches the Kronecker symbol of the discriminant.
    pub fn validate(&self, algebra: &EtaleAlgebra) -> Result<()> {
        let spl = algebra.splitting(self.level)?;
        let comp = spl
            .components
            .get(self.component)
            .ok_or(Error::IndexOutOfRange { index: self.component, max: spl.len().saturating_sub(1) })?;
        if !is_prime(&self.prime) {
            return Err(Error::Malformed(format!("{} is not prime", self.prime)));
        }
        let ok = match (&comp.field, self.kind) {
            (ComponentField::Rational, None) => true,
            (ComponentField::Quadratic { radicand }, Some(kind)) => {
                let field = QuadraticField::new(radicand)?;
                field.primes_above(&self.prime).iter().any(|pr| pr.kind == kind)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Malformed(format!("place kind does not match component {}", self.component)))
        }
    }
}

/// A finite formal sum of places of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    level: usize,
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero(level: usize) -> Self {
        Divisor { level, terms: BTreeMap::new() }
    }

    pub fn from_place(place: Place) -> Self {
        let mut d = Divisor::zero(place.level);
        d.terms.insert(place, 1);
        d
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<Place, i64> {
        &self.terms
    }

    pub fn coeff(&self, place: &Place) -> i64 {
        self.terms.get(place).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, place: Place, coeff: i64) -> Result<()> {
        if place.level != self.level {
            return Err(Error::LevelMismatch(format!("level-{} place in a level-{} divisor", place.level, self.level)));
        }
        if coeff == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(place).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
        Ok(())
    }

    pub fn add(&self, other: &Divisor) -> Result<Divisor> {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), *c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Divisor {
        let mut out = Divisor::zero(self.level);
        if k != 0 {
            out.terms = self.terms.iter().map(|(p, c)| (p.clone(), c * k)).collect();
        }
        out
    }

    pub fn sub(&self, other: &Divisor) -> Result<Divisor> {
        self.add(&other.scale(-1))
    }

    /// Rational primes below the support.
    pub fn primes(&self) -> BTreeSet<BigInt> {
        self.terms.keys().map(|p| p.prime.clone()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    component: usize,
    #[serde(with = "serde_bigint")]
    prime: BigInt,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<PlaceKind>,
    coeff: i64,
}

#[derive(Serialize, Deserialize)]
struct DivisorRepr {
    level: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|(p, &coeff)| TermRepr { component: p.component, prime: p.prime.clone(), kind: p.kind, coeff })
            .collect();
        DivisorRepr { level: self.level, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Divisor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DivisorRepr::deserialize(d)?;
        let mut out = Divisor::zero(repr.level);
        for t in repr.terms {
            let place = Place { level: repr.level, component: t.component, prime: t.prime, kind: t.kind };
            out.add_term(place, t.coeff).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

fn field_for(cache: &mut HashMap<BigInt, QuadraticField>, radicand: &BigInt) -> Result<QuadraticField> {
    if let Some(f) = cache.get(radicand) {
        return Ok(f.clone());
    }
    let f = QuadraticField::new(radicand)?;
    cache.insert(radicand.clone(), f.clone());
    Ok(f)
}

/// Divisor of component values at level `level`.
pub fn divisor_of_values(algebra: &EtaleAlgebra, level: usize, values: &[FieldElement]) -> Result<Divisor> {
    let spl = algebra.splitting(level)?;
    let mut fields = HashMap::new();
    let mut out = Divisor::zero(level);
    for (k, (comp, x)) in spl.components.iter().zip(values).enumerate() {
        if x.is_zero() {
            return Err(Error::NonUnit);
        }
        match &comp.field {
            ComponentField::Rational => {
                let mut primes = prime_divisors(x.a.numer());
                primes.extend(prime_divisors(x.a.denom()));
                for p in primes {
                    let v = valuation_rational(&x.a, &p);
                    out.add_term(Place::rational(level, k, p), v)?;
                }
            }
            ComponentField::Quadratic { radicand } => {
                let field = field_for(&mut fields, radicand)?;
                let e = field.to_elt(x);
                let (nm, m) = field.support_candidates(&e)?;
                let mut primes: BTreeSet<BigInt> = prime_divisors(&nm).into_iter().collect();
                primes.extend(prime_divisors(&m));
                for p in primes {
                    for pr in field.primes_above(&p) {
                        let v = field.valuation(&e, &pr)?;
                        out.add_term(Place::quadratic(level, k, p.clone(), pr.kind), v)?;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Sum over the components of the divisors of the projections of `a`.
pub fn divisor_of(a: &TensorElement) -> Result<Divisor> {
    divisor_of_values(a.algebra(), a.level(), &a.project()?)
}

/// An algebra morphism `R_m -> R_n` between split tensor powers, given by
/// its component matrix: for each target component, the unique source
/// component mapping into it and whether the embedding conjugates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentMap {
    pub source_level: usize,
    pub target_level: usize,
    pub embeddings: Vec<ComponentEmbedding>,
}

impl ComponentMap {
    /// The face map `epsilon_i^n : R_n -> R_(n+1)`.
    pub fn face(algebra: &EtaleAlgebra, n: usize, i: usize) -> Result<Self> {
        if i > n + 1 {
            return Err(Error::IndexOutOfRange { index: i, max: n + 1 });
        }
        let src = algebra.splitting(n)?;
        let tgt = algebra.splitting(n + 1)?;
        Ok(ComponentMap { source_level: n, target_level: n + 1, embeddings: face_embeddings(&src, &tgt, i) })
    }

    pub fn identity(algebra: &EtaleAlgebra, n: usize) -> Result<Self> {
        let spl = algebra.splitting(n)?;
        let embeddings = (0..spl.len()).map(|k| ComponentEmbedding { source: k, conjugate: false }).collect();
        Ok(ComponentMap { source_level: n, target_level: n, embeddings })
    }

    /// Apply the morphism to component values.
    pub fn apply(&self, values: &[FieldElement]) -> Vec<FieldElement> {
        self.embeddings
            .iter()
            .map(|e| {
                let x = &values[e.source];
                if e.conjugate {
                    x.conjugate()
                } else {
                    x.clone()
                }
            })
            .collect()
    }
}

/// `Dc(f)`: each place goes to the places above it, weighted by
/// ramification, in every target component fed by its component.
pub fn pushforward(algebra: &EtaleAlgebra, f: &ComponentMap, d: &Divisor) -> Result<Divisor> {
    if d.level != f.source_level {
        return Err(Error::LevelMismatch(format!(
            "level-{} divisor pushed along a map from level {}",
            d.level, f.source_level
        )));
    }
    let src = algebra.splitting(f.source_level)?;
    let tgt = algebra.splitting(f.target_level)?;
    let mut fed: Vec<Vec<usize>> = vec![Vec::new(); src.len()];
    for (j, e) in f.embeddings.iter().enumerate() {
        fed[e.source].push(j);
    }
    let mut fields = HashMap::new();
    let mut out = Divisor::zero(f.target_level);
    for (place, &coeff) in &d.terms {
        let Some(targets) = fed.get(place.component) else {
            return Err(Error::IndexOutOfRange { index: place.component, max: src.len().saturating_sub(1) });
        };
        for &j in targets {
            let lvl = f.target_level;
            let p = place.prime.clone();
            match (&tgt.components[j].field, place.kind) {
                (ComponentField::Rational, None) => out.add_term(Place::rational(lvl, j, p), coeff)?,
                (ComponentField::Quadratic { .. }, Some(kind)) => {
                    let kind = if f.embeddings[j].conjugate { kind.conjugate() } else { kind };
                    out.add_term(Place::quadratic(lvl, j, p, kind), coeff)?;
                }
                (ComponentField::Quadratic { radicand }, None) => {
                    let field = field_for(&mut fields, radicand)?;
                    for pr in field.primes_above(&p) {
                        out.add_term(Place::quadratic(lvl, j, p.clone(), pr.kind), coeff * pr.kind.ramification())?;
                    }
                }
                (ComponentField::Rational, Some(_)) => {
                    return Err(Error::InconsistentPresentation("quadratic component mapped into Q".into()))
                }
            }
        }
    }
    Ok(out)
}

/// `Dc(Delta^n) = sum_(i=0..=n+1) (-1)^i Dc(epsilon_i^n)`.
pub fn delta_divisor(algebra: &EtaleAlgebra, d: &Divisor) -> Result<Divisor> {
    let n = d.level;
    let mut out = Divisor::zero(n + 1);
    for i in 0..=n + 1 {
        let img = pushforward(algebra, &ComponentMap::face(algebra, n, i)?, d)?;
        out = if i % 2 == 0 { out.add(&img)? } else { out.sub(&img)? };
    }
    Ok(out)
}

/// The level-0 place below `q` along `epsilon_0^0`.
fn place_below(algebra: &EtaleAlgebra, f0: &ComponentMap, q: &Place) -> Result<Place> {
    let e = f0.embeddings[q.component];
    let src = algebra.splitting(0)?;
    Ok(match src.components[e.source].field {
        ComponentField::Rational => Place::rational(0, e.source, q.prime.clone()),
        ComponentField::Quadratic { .. } => {
            let kind = q.kind.expect("quadratic source feeds a quadratic component");
            let kind = if e.conjugate { kind.conjugate() } else { kind };
            Place::quadratic(0, e.source, q.prime.clone(), kind)
        }
    })
}

/// For `D` of level 1 with `Dc(Delta^1)(D) = 0` and support away from
/// ramified primes, the divisor `E = sum_P (min_(Q_0 = P) n_Q) P` with
/// `Dc(Delta^0)(E) = D`.
pub fn divisor_trivialize(algebra: &EtaleAlgebra, d: &Divisor) -> Result<Divisor> {
    if d.level != 1 {
        return Err(Error::LevelMismatch(format!("level-{} divisor, expected level 1", d.level)));
    }
    if !delta_divisor(algebra, d)?.is_zero() {
        return Err(Error::NotInKernel);
    }
    let ramified = ramified_places(algebra)?;
    if d.terms.keys().any(|p| ramified.contains(&p.prime)) {
        return Err(Error::RamifiedSupport);
    }
    let f0 = ComponentMap::face(algebra, 0, 0)?;
    let below: BTreeSet<Place> =
        d.terms.keys().map(|q| place_below(algebra, &f0, q)).collect::<Result<_>>()?;
    let mut e = Divisor::zero(0);
    for p in below {
        let above = pushforward(algebra, &f0, &Divisor::from_place(p.clone()))?;
        let m = above.terms.keys().map(|q| d.coeff(q)).min().unwrap_or(0);
        e.add_term(p, m)?;
    }
    let check = delta_divisor(algebra, &e)?;
    if &check != d {
        return Err(Error::InconsistentPresentation("Hilbert 90 candidate does not trivialise".into()));
    }
    Ok(e)
}

/// Rational primes ramified in some component of `F`.
pub fn ramified_places(algebra: &EtaleAlgebra) -> Result<BTreeSet<BigInt>> {
    let spl = algebra.splitting(0)?;
    let mut out = BTreeSet::new();
    for c in &spl.components {
        if let ComponentField::Quadratic { radicand } = &c.field {
            let field = QuadraticField::new(radicand)?;
            out.extend(prime_divisors(field.discriminant()));
        }
    }
    Ok(out)
}

/// Class group of a component field: generating prime ideals and
/// invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    pub field: ComponentField,
    pub generators: Vec<PrimeIdeal>,
    #[serde(with = "crate::exact::rational::serde_bigint_vec")]
    pub invariants: Vec<BigInt>,
}

impl ClassGroup {
    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }
}

pub fn class_group(field: &ComponentField, options: &ArithmeticOptions) -> Result<ClassGroup> {
    match field {
        ComponentField::Rational => Ok(ClassGroup { field: field.clone(), generators: Vec::new(), invariants: Vec::new() }),
        ComponentField::Quadratic { radicand } => {
            let mut cache = FieldCache::new(options);
            let data = cache.get(radicand)?;
            let generators = data.class.generating.iter().map(|&i| data.class.factor_base[i].clone()).collect();
            Ok(ClassGroup { field: field.clone(), generators, invariants: data.class.invariants.clone() })
        }
    }
}

/// Primes below the class-group generators of the components of `F`.
pub(crate) fn class_group_primes(algebra: &EtaleAlgebra, cache: &mut FieldCache) -> Result<BTreeSet<BigInt>> {
    let spl = algebra.splitting(0)?;
    let mut out = BTreeSet::new();
    for c in &spl.components {
        if let ComponentField::Quadratic { radicand } = &c.field {
            let data = cache.get(radicand)?;
            out.extend(data.class.generating.iter().map(|&i| data.class.factor_base[i].p.clone()));
        }
    }
    Ok(out)
}

/// Whether `d` is supported above the primes in `s`.
pub fn supported_above(d: &Divisor, s: &BTreeSet<BigInt>) -> bool {
    d.terms.keys().all(|p| s.contains(&p.prime))
}

#[cfg(test)]
mod tests;
