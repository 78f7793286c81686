//! Present a scrambled matrix algebra as `A(F, c)`.

use amitsur::csa::{present, PresentOptions, RngSeed};
use amitsur::pipeline::{generate_instance, Witness};

fn main() {
    let inst = generate_instance(2, RngSeed(3), Witness::None).expect("degree 2");
    let p = present(&inst.algebra, RngSeed(3), &PresentOptions::default()).expect("presentation");
    println!("P = {}", p.p);
    println!("F components: {:?}", p.algebra().factors().iter().map(|f| f.to_string()).collect::<Vec<_>>());
    println!("c = {}", p.c.value());
    println!("e is {}x{}, homomorphism: {}", p.e.rows, p.e.cols, p.check_homomorphism(&inst.algebra).unwrap());
}
