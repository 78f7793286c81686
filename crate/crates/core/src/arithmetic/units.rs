//! S-unit groups of split tensor powers and linear algebra in finitely
//! generated abelian groups.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::quadratic::{Elt, QuadraticSUnits};
use super::{FieldCache, FieldData};
use crate::error::{Error, Result};
use crate::etale::{ComponentField, EtaleAlgebra, FieldElement, TensorElement};
use crate::exact::integer::valuation_rational;
use crate::exact::rational::serde_bigint_vec;
use crate::exact::snf::{integer_kernel, reduce_modulo_lattice, solve_integer, IntegerSolution};
use crate::exact::{smith_normal_form, IntMatrix, Rational, RationalMatrix};

/// `Z/t_1 + ... + Z/t_k + Z^r` with explicit generators, torsion first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    pub generators: Vec<TensorElement>,
    pub free_rank: usize,
    #[serde(with = "serde_bigint_vec")]
    pub torsion_invariants: Vec<BigInt>,
}

impl FgAbelianGroup {
    /// Abstract group without attached elements.
    pub fn abstract_group(free_rank: usize, torsion_invariants: Vec<BigInt>) -> Self {
        FgAbelianGroup { generators: Vec::new(), free_rank, torsion_invariants }
    }

    pub fn ngens(&self) -> usize {
        self.torsion_invariants.len() + self.free_rank
    }

    /// Order of generator `j`, `None` when it is free.
    pub fn order(&self, j: usize) -> Option<&BigInt> {
        self.torsion_invariants.get(j)
    }

    /// Canonical representative of a coordinate vector.
    pub fn normalise(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter()
            .enumerate()
            .map(|(j, v)| match self.order(j) {
                Some(d) => v.mod_floor(d),
                None => v.clone(),
            })
            .collect()
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.normalise(x).iter().all(Zero::is_zero)
    }
}

/// Groups of rows and columns of `m` that interact.
fn blocks(m: &IntMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (rows, cols) = (m.rows, m.cols);
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    for i in 0..rows {
        for j in 0..cols {
            if !m.get(i, j).is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, rows + j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for x in 0..rows + cols {
        let r = find(&mut parent, x);
        let k = *index.entry(r).or_insert_with(|| {
            out.push((Vec::new(), Vec::new()));
            out.len() - 1
        });
        if x < rows {
            out[k].0.push(x);
        } else {
            out[k].1.push(x - rows);
        }
    }
    out
}

/// Solve `m x = b` block by block, reducing each block solution modulo the
/// block kernel.
fn solve_blocks(m: &IntMatrix, b: &[BigInt], reduce: bool) -> Result<IntegerSolution> {
    let mut x = vec![BigInt::zero(); m.cols];
    for (rows, cols) in blocks(m) {
        if cols.is_empty() {
            if let Some(&i) = rows.iter().find(|&&i| !b[i].is_zero()) {
                let mut certificate = vec![Rational::zero(); m.rows];
                certificate[i] = Rational::one();
                return Ok(IntegerSolution::Insoluble { certificate });
            }
            continue;
        }
        let mut sub = IntMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                sub.set(a, c, m.get(i, j).clone());
            }
        }
        let rhs: Vec<BigInt> = rows.iter().map(|&i| b[i].clone()).collect();
        match solve_integer(&sub, &rhs)? {
            IntegerSolution::Solved(y) => {
                let y = if reduce {
                    let kernel = integer_kernel(&sub);
                    reduce_modulo_lattice(&y, &kernel)
                } else {
                    y
                };
                for (c, &j) in cols.iter().enumerate() {
                    x[j] = y[c].clone();
                }
            }
            IntegerSolution::Insoluble { certificate: cert } => {
                let mut certificate = vec![Rational::zero(); m.rows];
                for (a, &i) in rows.iter().enumerate() {
                    certificate[i] = cert[a].clone();
                }
                return Ok(IntegerSolution::Insoluble { certificate });
            }
        }
    }
    Ok(IntegerSolution::Solved(x))
}

/// Preimage of `target` under the homomorphism `G -> H` whose column `j`
/// is the `H`-coordinate vector of the image of generator `j` of `G`.
///
/// The solution is normalised in `G` and reduced modulo the kernel.
pub fn solve_in_fg_abelian(
    g: &FgAbelianGroup,
    h: &FgAbelianGroup,
    hom: &IntMatrix,
    target: &[BigInt],
) -> Result<IntegerSolution> {
    let (hn, gn) = (h.ngens(), g.ngens());
    if hom.rows != hn || hom.cols != gn || target.len() != hn {
        return Err(Error::DimensionMismatch(format!(
            "hom of shape {}x{} between groups on {} and {} generators",
            hom.rows,
            hom.cols,
            gn,
            hn
        )));
    }
    for (j, d) in g.torsion_invariants.iter().enumerate() {
        let image: Vec<BigInt> = hom.column(j).iter().map(|x| x * d).collect();
        if !h.is_zero(&image) {
            return Err(Error::InconsistentPresentation(format!(
                "generator {j} of order {d} is sent to an element of infinite or incompatible order"
            )));
        }
    }
    let t = h.torsion_invariants.len();
    let mut m = IntMatrix::zeros(hn, gn + t);
    for i in 0..hn {
        for j in 0..gn {
            m.set(i, j, hom.get(i, j).clone());
        }
    }
    for (i, d) in h.torsion_invariants.iter().enumerate() {
        m.set(i, gn + i, d.clone());
    }
    Ok(match solve_blocks(&m, target, true)? {
        IntegerSolution::Solved(x) => IntegerSolution::Solved(g.normalise(&x[..gn])),
        other => other,
    })
}

/// Units and S-unit data of one component.
#[derive(Clone, Debug)]
enum ComponentUnits {
    Rational,
    Quadratic { data: Arc<FieldData>, sunits: QuadraticSUnits },
}

impl ComponentUnits {
    fn torsion_order(&self) -> u32 {
        match self {
            ComponentUnits::Rational => 2,
            ComponentUnits::Quadratic { data, .. } => data.units.torsion_order,
        }
    }

    fn free_rank(&self, primes: usize) -> usize {
        match self {
            ComponentUnits::Rational => primes,
            ComponentUnits::Quadratic { data, sunits } => {
                usize::from(data.units.fundamental.is_some()) + sunits.generators.len()
            }
        }
    }
}

/// The S-unit group of `R_n` for a finite set `S` of rational primes:
/// units of every component whose divisors lie above `S`.
#[derive(Clone, Debug)]
pub struct SUnitGroup {
    algebra: Arc<EtaleAlgebra>,
    level: usize,
    primes: Vec<BigInt>,
    components: Vec<ComponentUnits>,
    /// Row `i` maps raw torsion exponents to invariant coordinate `i`.
    torsion_u: IntMatrix,
    /// Raw torsion exponents of the invariant-form generators.
    torsion_gens: Vec<Vec<BigInt>>,
    torsion_invariants: Vec<BigInt>,
    free_offsets: Vec<usize>,
    free_rank: usize,
}

pub fn s_unit_group(
    algebra: &Arc<EtaleAlgebra>,
    level: usize,
    primes: &BTreeSet<BigInt>,
    cache: &mut FieldCache,
) -> Result<SUnitGroup> {
    SUnitGroup::new(algebra, level, primes, cache)
}

fn int_to_rational(m: &IntMatrix) -> RationalMatrix {
    let mut out = RationalMatrix::zeros(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out.set(i, j, Rational::from_integer(m.get(i, j).clone()));
        }
    }
    out
}

impl SUnitGroup {
    pub fn new(
        algebra: &Arc<EtaleAlgebra>,
        level: usize,
        primes: &BTreeSet<BigInt>,
        cache: &mut FieldCache,
    ) -> Result<Self> {
        let spl = algebra.splitting(level)?;
        let plist: Vec<BigInt> = primes.iter().cloned().collect();
        let mut components = Vec::with_capacity(spl.len());
        for c in &spl.components {
            components.push(match &c.field {
                ComponentField::Rational => ComponentUnits::Rational,
                ComponentField::Quadratic { radicand } => {
                    let data = cache.get(radicand)?;
                    let sunits = QuadraticSUnits::new(&data.field, &data.class, &plist)?;
                    // Dirichlet: rank = places above S + unit rank
                    let unit_rank = usize::from(data.field.is_real());
                    let expected = sunits.places.len() + unit_rank;
                    if sunits.generators.len() + unit_rank != expected {
                        return Err(Error::InconsistentPresentation("S-unit rank check failed".into()));
                    }
                    ComponentUnits::Quadratic { data, sunits }
                }
            });
        }
        let k = components.len();
        let mut diag = IntMatrix::zeros(k, k);
        for (i, c) in components.iter().enumerate() {
            diag.set(i, i, BigInt::from(c.torsion_order()));
        }
        let snf = smith_normal_form(&diag);
        let u_inv = int_to_rational(&snf.u)
            .inverse()
            .ok_or_else(|| Error::InconsistentPresentation("torsion transform is singular".into()))?;
        let keep: Vec<usize> = (0..k).filter(|&i| !snf.invariants[i].is_one()).collect();
        let mut torsion_u = IntMatrix::zeros(keep.len(), k);
        for (r, &i) in keep.iter().enumerate() {
            for j in 0..k {
                torsion_u.set(r, j, snf.u.get(i, j).clone());
            }
        }
        let torsion_gens = keep.iter().map(|&i| u_inv.column(i).iter().map(|x| x.to_integer()).collect()).collect();
        let torsion_invariants = keep.iter().map(|&i| snf.invariants[i].clone()).collect();
        let mut free_offsets = Vec::with_capacity(k);
        let mut free_rank = 0;
        for c in &components {
            free_offsets.push(free_rank);
            free_rank += c.free_rank(plist.len());
        }
        Ok(SUnitGroup {
            algebra: algebra.clone(),
            level,
            primes: plist,
            components,
            torsion_u,
            torsion_gens,
            torsion_invariants,
            free_offsets,
            free_rank,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn primes(&self) -> &[BigInt] {
        &self.primes
    }

    pub fn ngens(&self) -> usize {
        self.torsion_invariants.len() + self.free_rank
    }

    /// The abstract group, without generator elements.
    pub fn shape(&self) -> FgAbelianGroup {
        FgAbelianGroup::abstract_group(self.free_rank, self.torsion_invariants.clone())
    }

    /// The group with its generators as tensor elements.
    pub fn group(&self) -> Result<FgAbelianGroup> {
        let generators = (0..self.ngens())
            .map(|j| TensorElement::from_components(&self.algebra, self.level, &self.generator_values(j)?))
            .collect::<Result<_>>()?;
        Ok(FgAbelianGroup { generators, ..self.shape() })
    }

    fn torsion_generator(&self, k: usize) -> FieldElement {
        match &self.components[k] {
            ComponentUnits::Rational => FieldElement::rational(-Rational::one()),
            ComponentUnits::Quadratic { data, .. } => data.field.to_field_element(&data.units.torsion_generator),
        }
    }

    /// Component values of generator `j`.
    pub fn generator_values(&self, j: usize) -> Result<Vec<FieldElement>> {
        let mut coords = vec![BigInt::zero(); self.ngens()];
        coords[j] = BigInt::one();
        self.values_of(&coords)
    }

    /// Component values of the element with the given coordinates.
    pub fn values_of(&self, coords: &[BigInt]) -> Result<Vec<FieldElement>> {
        if coords.len() != self.ngens() {
            return Err(Error::DimensionMismatch(format!("{} coordinates for {} generators", coords.len(), self.ngens())));
        }
        let t = self.torsion_invariants.len();
        let spl = self.algebra.splitting(self.level)?;
        let mut raw = vec![BigInt::zero(); self.components.len()];
        for (c, g) in coords[..t].iter().zip(&self.torsion_gens) {
            for (r, x) in raw.iter_mut().zip(g) {
                *r += c * x;
            }
        }
        let free = &coords[t..];
        let mut out = Vec::with_capacity(self.components.len());
        for (k, comp) in self.components.iter().enumerate() {
            let field = &spl.components[k].field;
            let w = BigInt::from(comp.torsion_order());
            let z = self.torsion_generator(k);
            let mut v = field.pow(&z, i64::try_from(raw[k].mod_floor(&w)).unwrap_or(0))?;
            let f = &free[self.free_offsets[k]..];
            match comp {
                ComponentUnits::Rational => {
                    let mut x = v.a.clone();
                    for (p, e) in self.primes.iter().zip(f) {
                        x *= rational_pow(p, e);
                    }
                    v = FieldElement::rational(x);
                }
                ComponentUnits::Quadratic { data, sunits } => {
                    let qf = &data.field;
                    let mut x: Elt = qf.to_elt(&v);
                    let mut idx = 0;
                    if let Some(eps) = &data.units.fundamental {
                        x = qf.mul(&x, &qf.pow(eps, &f[0])?);
                        idx = 1;
                    }
                    for (g, e) in sunits.generators.iter().zip(&f[idx..]) {
                        if !e.is_zero() {
                            x = qf.mul(&x, &qf.pow(g, e)?);
                        }
                    }
                    v = qf.to_field_element(&x);
                }
            }
            out.push(v);
        }
        Ok(out)
    }

    pub fn element(&self, coords: &[BigInt]) -> Result<TensorElement> {
        TensorElement::from_components(&self.algebra, self.level, &self.values_of(coords)?)
    }

    /// Coordinates of an S-unit given by its component values.
    pub fn coordinates_of_values(&self, values: &[FieldElement]) -> Result<Vec<BigInt>> {
        if values.len() != self.components.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} components",
                values.len(),
                self.components.len()
            )));
        }
        let mut raw = Vec::with_capacity(values.len());
        let mut free = vec![BigInt::zero(); self.free_rank];
        for (k, (comp, x)) in self.components.iter().zip(values).enumerate() {
            if x.is_zero() {
                return Err(Error::NonUnit);
            }
            let f = &mut free[self.free_offsets[k]..];
            match comp {
                ComponentUnits::Rational => {
                    if !x.b.is_zero() {
                        return Err(Error::Malformed("irrational value on a rational component".into()));
                    }
                    let mut rest = x.a.clone();
                    for (i, p) in self.primes.iter().enumerate() {
                        let e = valuation_rational(&x.a, p);
                        f[i] = BigInt::from(e);
                        rest /= rational_pow(p, &BigInt::from(e));
                    }
                    if !rest.abs().is_one() {
                        return Err(Error::Malformed("element is not an S-unit".into()));
                    }
                    raw.push(BigInt::from(u8::from(rest.is_negative())));
                }
                ComponentUnits::Quadratic { data, sunits } => {
                    let qf = &data.field;
                    let (j, e, gens) = sunits.log(qf, &data.units, &qf.to_elt(x))?;
                    raw.push(BigInt::from(j));
                    let mut idx = 0;
                    if data.units.fundamental.is_some() {
                        f[0] = e;
                        idx = 1;
                    }
                    for (slot, g) in f[idx..].iter_mut().zip(gens) {
                        *slot = g;
                    }
                }
            }
        }
        let mut out: Vec<BigInt> = self
            .torsion_u
            .mul_vec(&raw)
            .into_iter()
            .zip(&self.torsion_invariants)
            .map(|(x, d)| x.mod_floor(d))
            .collect();
        out.extend(free);
        Ok(out)
    }

    pub fn coordinates(&self, x: &TensorElement) -> Result<Vec<BigInt>> {
        if x.level() != self.level || x.algebra().as_ref() != self.algebra.as_ref() {
            return Err(Error::LevelMismatch("element outside the S-unit group's algebra".into()));
        }
        self.coordinates_of_values(&x.project()?)
    }
}

fn rational_pow(p: &BigInt, e: &BigInt) -> Rational {
    let k = e.abs().to_u32_digits().1.first().copied().unwrap_or(0);
    let x = Rational::from_integer(num_traits::pow(p.clone(), k as usize));
    if e.is_negative() {
        x.recip()
    } else {
        x
    }
}
