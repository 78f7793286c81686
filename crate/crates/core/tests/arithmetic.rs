use std::collections::BTreeSet;

use num_bigint::BigInt;

use amitsur::amitsur::Cocycle2;
use amitsur::arithmetic::{
    divisor_of, s_unit_group, trivialize_coboundary, ArithmeticOptions, FieldCache, FgAbelianGroup,
};
use amitsur::etale::{delta, EtaleAlgebra, FieldElement, TensorElement};
use amitsur::exact::snf::IntegerSolution;
use amitsur::exact::{rat, IntMatrix};

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

fn primes(ps: &[i64]) -> BTreeSet<BigInt> {
    ps.iter().map(|&p| b(p)).collect()
}

#[test]
fn rational_s_units_for_two_and_three() {
    let f = EtaleAlgebra::from_ints(&[-1, 1]).unwrap();
    let mut cache = FieldCache::new(&ArithmeticOptions::default());
    let g = s_unit_group(&f, 0, &primes(&[2, 3]), &mut cache).unwrap();
    let group = g.group().unwrap();
    assert_eq!(group.torsion_invariants, vec![b(2)]);
    assert_eq!(group.free_rank, 2);
    let gens: Vec<String> = group.generators.iter().map(|x| x.to_string()).collect();
    assert_eq!(gens, ["-1", "2", "3"]);
}

#[test]
fn imaginary_field_with_class_number_two() {
    let f = EtaleAlgebra::from_ints(&[5, 0, 1]).unwrap();
    let mut cache = FieldCache::new(&ArithmeticOptions::default());
    let g = s_unit_group(&f, 0, &BTreeSet::new(), &mut cache).unwrap();
    assert_eq!(g.shape(), FgAbelianGroup::abstract_group(0, vec![b(2)]));
    let data = cache.get(&b(-5)).unwrap();
    assert_eq!(data.class.invariants, vec![b(2)]);
}

#[test]
fn real_field_with_unit_one_plus_sqrt_two() {
    let f = EtaleAlgebra::from_ints(&[-2, 0, 1]).unwrap();
    let mut cache = FieldCache::new(&ArithmeticOptions::default());
    let g = s_unit_group(&f, 0, &BTreeSet::new(), &mut cache).unwrap();
    let eps = &g.generator_values(1).unwrap()[0];
    let candidates = [
        FieldElement::new(rat(1), rat(1)),
        FieldElement::new(rat(1), rat(-1)),
        FieldElement::new(rat(-1), rat(1)),
        FieldElement::new(rat(-1), rat(-1)),
    ];
    assert!(candidates.contains(eps));
    // 1 + sqrt 2 has coordinates (0, +-1)
    let x = TensorElement::from_components(&f, 0, &[candidates[0].clone()]).unwrap();
    let c = g.coordinates(&x).unwrap();
    assert_eq!(c[0], b(0));
    assert_eq!(c[1].magnitude(), b(1).magnitude());
}

#[test]
fn preimage_in_group_with_torsion() {
    // Z^2 -> Z/2 + Z^2
    let g = FgAbelianGroup::abstract_group(2, vec![]);
    let h = FgAbelianGroup::abstract_group(2, vec![b(2)]);
    let hom = IntMatrix::from_i64(3, 2, &[1, 0, 2, 1, -1, 3]);
    let x = [b(4), b(-3)];
    let target = h.normalise(&hom.mul_vec(&x));
    let IntegerSolution::Solved(y) = amitsur::arithmetic::solve_in_fg_abelian(&g, &h, &hom, &target).unwrap() else {
        panic!("target lies in the image");
    };
    assert_eq!(h.normalise(&hom.mul_vec(&y)), target);
}

#[test]
fn trivialisation_over_gaussian_field() {
    let f = EtaleAlgebra::from_ints(&[1, 0, 1]).unwrap();
    let a0 = TensorElement::from_ints(&f, 1, &[2, 1, -1, 3]).unwrap();
    let bc = Cocycle2::new(delta(&a0).unwrap()).unwrap();
    let t = trivialize_coboundary(&bc, &ArithmeticOptions::default()).unwrap();
    assert_eq!(&delta(&t.cochain).unwrap(), bc.value());
    let support = divisor_of(&t.cochain).unwrap().primes();
    assert!(support.iter().all(|p| t.primes.contains(p)));
}
