use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::amitsur::Cocycle2;
use crate::etale::{delta, epsilon};
use crate::exact::{rat, ratio};

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

fn alg(coeffs: &[i64]) -> Arc<EtaleAlgebra> {
    EtaleAlgebra::from_ints(coeffs).unwrap()
}

/// Component values from a stream of small integers: each rational
/// component takes `x / y`, each quadratic component `x + y sqrt s`.
fn values_from(algebra: &EtaleAlgebra, level: usize, seed: &[i64]) -> Vec<FieldElement> {
    let spl = algebra.splitting(level).unwrap();
    let mut it = seed.iter().cycle();
    let mut nonzero = || loop {
        let x = *it.next().unwrap();
        if x != 0 {
            return x;
        }
    };
    spl.components
        .iter()
        .map(|c| match c.field {
            ComponentField::Rational => FieldElement::rational(ratio(nonzero(), nonzero().abs())),
            ComponentField::Quadratic { .. } => FieldElement::new(rat(nonzero()), rat(nonzero() / 2)),
        })
        .collect()
}

fn unit(algebra: &Arc<EtaleAlgebra>, level: usize, seed: &[i64]) -> TensorElement {
    TensorElement::from_components(algebra, level, &values_from(algebra, level, seed)).unwrap()
}

const ALGEBRAS: [&[i64]; 5] = [&[0, -1, 1], &[0, -1, 0, 1], &[-2, 0, 1], &[1, 0, 1], &[6, -5, 1]];

#[test]
fn divisor_of_split_pair() {
    let f = alg(&[0, -1, 1]);
    let spl = f.splitting(0).unwrap();
    let a = unit(&f, 0, &[2, 1, 3, 1]);
    let d = divisor_of(&a).unwrap();
    let mut expected = Divisor::zero(0);
    expected.add_term(Place::rational(0, 0, b(2)), 1).unwrap();
    expected.add_term(Place::rational(0, 1, b(3)), 1).unwrap();
    assert_eq!(spl.len(), 2);
    assert_eq!(d, expected);
    assert!(divisor_of(&TensorElement::one(&f, 0)).unwrap().is_zero());
}

#[test]
fn divisor_of_sqrt_two() {
    let f = alg(&[-2, 0, 1]);
    let x = TensorElement::variable(&f, 0, 0);
    let d = divisor_of(&x).unwrap();
    assert_eq!(d, Divisor::from_place(Place::quadratic(0, 0, b(2), PlaceKind::Ramified)));
}

#[test]
fn divisor_of_zero_divisor_fails() {
    let f = alg(&[0, -1, 1]);
    let x = TensorElement::variable(&f, 0, 0);
    assert_eq!(divisor_of(&x), Err(Error::NonUnit));
}

#[test]
fn identity_pushforward() {
    let f = alg(&[1, 0, 1]);
    let a = unit(&f, 1, &[3, 5, -7, 2, 10]);
    let d = divisor_of(&a).unwrap();
    let id = ComponentMap::identity(&f, 1).unwrap();
    assert_eq!(pushforward(&f, &id, &d).unwrap(), d);
}

#[test]
fn face_zero_on_split_pair() {
    let f = alg(&[0, -1, 1]);
    let face = ComponentMap::face(&f, 0, 0).unwrap();
    let spl1 = f.splitting(1).unwrap();
    let d = Divisor::from_place(Place::rational(0, 0, b(5)));
    let img = pushforward(&f, &face, &d).unwrap();
    // epsilon_0 inserts the new slot first, so level-1 tuples (*, 0) lie over component 0
    let expected: BTreeSet<usize> =
        spl1.components.iter().enumerate().filter(|(_, c)| c.tuple[1] == 0).map(|(k, _)| k).collect();
    let got: BTreeSet<usize> = img.terms().keys().map(|p| p.component).collect();
    assert_eq!(got, expected);
    assert_eq!(got.len(), 2);
    assert!(img.terms().values().all(|&c| c == 1));
}

#[test]
fn ramified_prime_sets() {
    assert_eq!(ramified_places(&alg(&[-2, 0, 1])).unwrap(), [b(2)].into_iter().collect());
    assert!(ramified_places(&alg(&[0, -1, 1])).unwrap().is_empty());
    assert_eq!(ramified_places(&alg(&[1, 0, 1])).unwrap(), [b(2)].into_iter().collect());
    assert_eq!(ramified_places(&alg(&[5, 0, 1])).unwrap(), [b(2), b(5)].into_iter().collect());
}

#[test]
fn class_groups_of_small_fields() {
    let opts = ArithmeticOptions::default();
    let cg = class_group(&ComponentField::Quadratic { radicand: b(-5) }, &opts).unwrap();
    assert_eq!(cg.invariants, vec![b(2)]);
    assert_eq!(cg.generators, vec![PrimeIdeal { p: b(2), kind: PlaceKind::Ramified }]);
    let cg = class_group(&ComponentField::Quadratic { radicand: b(2) }, &opts).unwrap();
    assert_eq!(cg.order(), b(1));
    assert_eq!(class_group(&ComponentField::Rational, &opts).unwrap().order(), b(1));
    let json = serde_json::to_string(&cg).unwrap();
    assert_eq!(serde_json::from_str::<ClassGroup>(&json).unwrap(), cg);
}

#[test]
fn discriminant_bound_is_enforced() {
    let opts = ArithmeticOptions { max_disc: b(10), bach_bound: false };
    let r = class_group(&ComponentField::Quadratic { radicand: b(-5) }, &opts);
    assert!(matches!(r, Err(Error::DiscriminantTooLarge { .. })));
}

#[test]
fn sqrt_two_units() {
    let f = alg(&[-2, 0, 1]);
    let mut cache = FieldCache::new(&ArithmeticOptions::default());
    let g = s_unit_group(&f, 0, &BTreeSet::new(), &mut cache).unwrap();
    assert_eq!(g.shape().torsion_invariants, vec![b(2)]);
    assert_eq!(g.shape().free_rank, 1);
    let eps = &g.generator_values(1).unwrap()[0];
    let norm = &eps.a * &eps.a - &eps.b * &eps.b * rat(2);
    assert_eq!(norm.abs(), rat(1));
    assert_eq!(eps.a.abs(), rat(1));
    assert_eq!(eps.b.abs(), rat(1));
}

#[test]
fn divisor_json_roundtrip() {
    let f = alg(&[1, 0, 1]);
    let d = divisor_of(&unit(&f, 1, &[3, 5, -7, 2, 10, 13])).unwrap();
    let json = serde_json::to_string(&d).unwrap();
    let back: Divisor = serde_json::from_str(&json).unwrap();
    assert_eq!(back, d);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v["terms"][0]["prime"].is_string());
}

#[test]
fn place_validation() {
    let f = alg(&[1, 0, 1]);
    assert!(Place::quadratic(0, 0, b(5), PlaceKind::SplitPlus).validate(&f).is_ok());
    assert!(Place::quadratic(0, 0, b(3), PlaceKind::SplitPlus).validate(&f).is_err());
    assert!(Place::quadratic(0, 0, b(9), PlaceKind::Inert).validate(&f).is_err());
    assert!(Place::rational(0, 0, b(3)).validate(&f).is_err());
}

#[test]
fn at_most_one_place_below() {
    for coeffs in ALGEBRAS {
        let f = alg(coeffs);
        for n in 0..2 {
            let spl = f.splitting(n).unwrap();
            for i in 0..=n + 1 {
                let face = ComponentMap::face(&f, n, i).unwrap();
                for p in [2i64, 3, 5, 7, 11, 13] {
                    let mut seen: std::collections::HashMap<Place, Place> = Default::default();
                    for k in 0..spl.len() {
                        let sources: Vec<Place> = match &spl.components[k].field {
                            ComponentField::Rational => vec![Place::rational(n, k, b(p))],
                            ComponentField::Quadratic { radicand } => QuadraticField::new(radicand)
                                .unwrap()
                                .primes_above(&b(p))
                                .into_iter()
                                .map(|pr| Place::quadratic(n, k, b(p), pr.kind))
                                .collect(),
                        };
                        for src in sources {
                            let img = pushforward(&f, &face, &Divisor::from_place(src.clone())).unwrap();
                            for q in img.terms().keys() {
                                if let Some(other) = seen.insert(q.clone(), src.clone()) {
                                    panic!("{q:?} lies over {other:?} and {src:?}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn unramified_places_have_index_one() {
    for coeffs in ALGEBRAS {
        let f = alg(coeffs);
        let ram = ramified_places(&f).unwrap();
        for n in 0..2 {
            for i in 0..=n + 1 {
                let face = ComponentMap::face(&f, n, i).unwrap();
                for p in [3i64, 5, 7, 11, 13] {
                    if ram.contains(&b(p)) {
                        continue;
                    }
                    let spl = f.splitting(n).unwrap();
                    for k in 0..spl.len() {
                        let src = match &spl.components[k].field {
                            ComponentField::Rational => Place::rational(n, k, b(p)),
                            ComponentField::Quadratic { radicand } => {
                                let qf = QuadraticField::new(radicand).unwrap();
                                let pr = qf.primes_above(&b(p))[0].clone();
                                Place::quadratic(n, k, b(p), pr.kind)
                            }
                        };
                        let img = pushforward(&f, &face, &Divisor::from_place(src)).unwrap();
                        assert!(img.terms().values().all(|&c| c == 1));
                    }
                }
            }
        }
    }
}

#[test]
fn hilbert_ninety_simple() {
    let f = alg(&[0, -1, 1]);
    let e = divisor_of(&unit(&f, 0, &[2, 1, 3, 1])).unwrap();
    let d = delta_divisor(&f, &e).unwrap();
    let e2 = divisor_trivialize(&f, &d).unwrap();
    assert_eq!(delta_divisor(&f, &e2).unwrap(), d);
    assert!(divisor_trivialize(&f, &Divisor::zero(1)).unwrap().is_zero());
}

#[test]
fn hilbert_ninety_errors() {
    let f = alg(&[0, -1, 1]);
    let d = Divisor::from_place(Place::rational(1, 0, b(5)));
    assert_eq!(divisor_trivialize(&f, &d), Err(Error::NotInKernel));
    assert!(matches!(divisor_trivialize(&f, &Divisor::zero(0)), Err(Error::LevelMismatch(_))));
    // F = Q x Q(sqrt 2)
    let g = alg(&[0, -2, 0, 1]);
    let k = g.splitting(0).unwrap().components.iter().position(|c| c.field == ComponentField::Rational).unwrap();
    let e = Divisor::from_place(Place::rational(0, k, b(2)));
    let d = delta_divisor(&g, &e).unwrap();
    assert!(!d.is_zero());
    assert_eq!(divisor_trivialize(&g, &d), Err(Error::RamifiedSupport));
}

#[test]
fn trivial_cocycle_trivialises() {
    for coeffs in ALGEBRAS {
        let f = alg(coeffs);
        let t = trivialize_coboundary(&Cocycle2::trivial(&f), &ArithmeticOptions::default()).unwrap();
        assert_eq!(delta(&t.cochain).unwrap(), TensorElement::one(&f, 2));
    }
}

#[test]
fn coboundary_of_quadratic_s_unit() {
    // a0 = 1 + X0 + 2 X1 over Q(sqrt 2)
    let f = alg(&[-2, 0, 1]);
    let a0 = TensorElement::from_ints(&f, 1, &[1, 2, 1, 0]).unwrap();
    let b0 = Cocycle2::new(delta(&a0).unwrap()).unwrap();
    let t = trivialize_coboundary(&b0, &ArithmeticOptions::default()).unwrap();
    assert_eq!(&delta(&t.cochain).unwrap(), b0.value());
    let s: BTreeSet<BigInt> = t.primes.iter().cloned().collect();
    assert!(supported_above(&divisor_of(&t.cochain).unwrap(), &s));
}

fn seed_vec(len: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-9i64..=9, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn divisor_is_multiplicative(k in 0usize..5, s1 in seed_vec(16), s2 in seed_vec(16)) {
        let f = alg(ALGEBRAS[k]);
        let (x, y) = (unit(&f, 1, &s1), unit(&f, 1, &s2));
        let lhs = divisor_of(&x.mul(&y).unwrap()).unwrap();
        let rhs = divisor_of(&x).unwrap().add(&divisor_of(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn naturality_of_faces(k in 0usize..5, n in 0usize..2, seed in seed_vec(24)) {
        let f = alg(ALGEBRAS[k]);
        let a = unit(&f, n, &seed);
        let da = divisor_of(&a).unwrap();
        for i in 0..=n + 1 {
            let face = ComponentMap::face(&f, n, i).unwrap();
            prop_assert_eq!(pushforward(&f, &face, &da).unwrap(), divisor_of(&epsilon(i, &a).unwrap()).unwrap());
        }
    }

    #[test]
    fn differential_commutes_with_divisor(k in 0usize..5, seed in seed_vec(16)) {
        let f = alg(ALGEBRAS[k]);
        let a = unit(&f, 1, &seed);
        prop_assert_eq!(
            delta_divisor(&f, &divisor_of(&a).unwrap()).unwrap(),
            divisor_of(&delta(&a).unwrap()).unwrap()
        );
    }

    #[test]
    fn differential_squares_to_zero(k in 0usize..5, seed in seed_vec(12)) {
        let f = alg(ALGEBRAS[k]);
        let d = divisor_of(&unit(&f, 0, &seed)).unwrap();
        let dd = delta_divisor(&f, &delta_divisor(&f, &d).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn hilbert_ninety_roundtrip(k in 0usize..5, seed in seed_vec(12)) {
        let f = alg(ALGEBRAS[k]);
        let ram = ramified_places(&f).unwrap();
        let e = divisor_of(&unit(&f, 0, &seed)).unwrap();
        let mut clean = Divisor::zero(0);
        for (p, c) in e.terms() {
            if !ram.contains(&p.prime) {
                clean.add_term(p.clone(), *c).unwrap();
            }
        }
        let d = delta_divisor(&f, &clean).unwrap();
        let e2 = divisor_trivialize(&f, &d).unwrap();
        prop_assert_eq!(delta_divisor(&f, &e2).unwrap(), d);
    }

    #[test]
    fn coboundaries_trivialise(k in 0usize..5, seed in seed_vec(16)) {
        let f = alg(ALGEBRAS[k]);
        let a0 = unit(&f, 1, &seed);
        let b0 = Cocycle2::new(delta(&a0).unwrap()).unwrap();
        let t = trivialize_coboundary(&b0, &ArithmeticOptions::default()).unwrap();
        prop_assert_eq!(&delta(&t.cochain).unwrap(), b0.value());
        let s: BTreeSet<BigInt> = t.primes.iter().cloned().collect();
        prop_assert!(supported_above(&divisor_of(&t.cochain).unwrap(), &s));
    }
}
