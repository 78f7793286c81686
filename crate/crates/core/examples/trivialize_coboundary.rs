//! Find `a` with `delta(a) = c` for a coboundary `c`, using S-units.

use amitsur::amitsur::Cocycle2;
use amitsur::arithmetic::{divisor_of, trivialize_coboundary, ArithmeticOptions};
use amitsur::etale::{delta, EtaleAlgebra, TensorElement};

fn main() {
    let f = EtaleAlgebra::from_ints(&[-3, 0, 1]).unwrap();
    let hidden = TensorElement::from_ints(&f, 1, &[5, 1, -2, 7]).unwrap();
    let c = Cocycle2::new(delta(&hidden).unwrap()).unwrap();
    println!("c = {}", c.value());
    println!("div(c) = {:?}", divisor_of(c.value()).unwrap().primes());

    let t = trivialize_coboundary(&c, &ArithmeticOptions::default()).unwrap();
    println!("S = {:?}", t.primes);
    println!("a = {}", t.cochain);
    assert_eq!(&delta(&t.cochain).unwrap(), c.value());
    println!("delta(a) = c");
}
