//! Class groups and S-unit groups of small quadratic fields.

use std::collections::BTreeSet;

use amitsur::arithmetic::{class_group, s_unit_group, ArithmeticOptions, FieldCache};
use amitsur::etale::{ComponentField, EtaleAlgebra};
use num_bigint::BigInt;

fn main() {
    let opts = ArithmeticOptions::default();
    for r in [-5i64, -23, 10, 79] {
        let field = ComponentField::Quadratic { radicand: BigInt::from(r) };
        let cl = class_group(&field, &opts).expect("small discriminant");
        let gens: Vec<String> = cl.generators.iter().map(|p| format!("{}:{:?}", p.p, p.kind)).collect();
        println!("{field}: class group {:?}, generators [{}]", cl.invariants, gens.join(", "));
    }

    let mut cache = FieldCache::new(&opts);
    let f = EtaleAlgebra::from_ints(&[-2, 0, 1]).unwrap();
    let s: BTreeSet<BigInt> = [2, 7].into_iter().map(BigInt::from).collect();
    let g = s_unit_group(&f, 0, &s, &mut cache).unwrap();
    let group = g.group().unwrap();
    println!("{{2,7}}-units of Q(sqrt 2): rank {}, torsion {:?}", group.free_rank, group.torsion_invariants);
    for (j, x) in group.generators.iter().enumerate() {
        println!("  g{j} = {x}");
    }
}
