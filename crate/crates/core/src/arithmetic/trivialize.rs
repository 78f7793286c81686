//! Trivialisation of Amitsur 2-coboundaries by S-unit linear algebra.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::units::{solve_in_fg_abelian, SUnitGroup};
use super::{class_group_primes, divisor_of_values, ramified_places, ArithmeticOptions, ComponentMap, FieldCache};
use crate::amitsur::Cocycle2;
use crate::error::{Error, Result};
use crate::etale::{delta, EtaleAlgebra, FieldElement, TensorElement};
use crate::exact::rational::serde_bigint_vec;
use crate::exact::snf::IntegerSolution;
use crate::exact::IntMatrix;

/// A 1-cochain `a` with `delta(a) = b` and the prime set `S` above which
/// it is an S-unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trivialisation {
    pub cochain: TensorElement,
    #[serde(with = "serde_bigint_vec")]
    pub primes: Vec<BigInt>,
}

/// The differential on component values: value `j` of the result is
/// `prod_i epsilon_i(x)_j^((-1)^i)`.
pub fn component_delta(algebra: &EtaleAlgebra, level: usize, values: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let target = algebra.splitting(level + 1)?;
    let mut out = vec![FieldElement::one(); target.len()];
    for i in 0..=level + 1 {
        let face = ComponentMap::face(algebra, level, i)?;
        let img = face.apply(values);
        for (j, (o, x)) in out.iter_mut().zip(img).enumerate() {
            let field = &target.components[j].field;
            let x = if i % 2 == 0 { x } else { field.inv(&x)? };
            *o = field.mul(o, &x);
        }
    }
    Ok(out)
}

/// Solve `delta(a) = b` for a level-1 S-unit `a`, with `S` the ramified
/// primes, the primes below the class-group generators of `F` and the
/// primes below the support of `b`.
pub fn trivialize_coboundary(b: &Cocycle2, options: &ArithmeticOptions) -> Result<Trivialisation> {
    let algebra = b.algebra();
    let mut cache = FieldCache::new(options);
    let bvals = b.value().project()?;
    let mut s: BTreeSet<BigInt> = ramified_places(algebra)?;
    s.extend(class_group_primes(algebra, &mut cache)?);
    s.extend(divisor_of_values(algebra, 2, &bvals)?.primes());

    let g1 = SUnitGroup::new(algebra, 1, &s, &mut cache)?;
    let g2 = SUnitGroup::new(algebra, 2, &s, &mut cache)?;
    let mut hom = IntMatrix::zeros(g2.ngens(), g1.ngens());
    for j in 0..g1.ngens() {
        let img = component_delta(algebra, 1, &g1.generator_values(j)?)?;
        for (i, c) in g2.coordinates_of_values(&img)?.into_iter().enumerate() {
            hom.set(i, j, c);
        }
    }
    let target = g2.coordinates_of_values(&bvals)?;
    let coords = match solve_in_fg_abelian(&g1.shape(), &g2.shape(), &hom, &target)? {
        IntegerSolution::Solved(x) => x,
        IntegerSolution::Insoluble { .. } => {
            return Err(Error::NotACoboundary(format!(
                "no S-unit trivialisation for S = {{{}}}",
                s.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
            )))
        }
    };
    let avals = g1.values_of(&coords)?;
    if component_delta(algebra, 1, &avals)? != bvals {
        return Err(Error::InconsistentPresentation("trivialisation fails the component check".into()));
    }
    let cochain = TensorElement::from_components(algebra, 1, &avals)?;
    if &delta(&cochain)? != b.value() {
        return Err(Error::InconsistentPresentation("trivialisation fails the tensor check".into()));
    }
    Ok(Trivialisation { cochain, primes: s.into_iter().collect() })
}
