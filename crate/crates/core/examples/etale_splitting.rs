//! Split `F^{⊗n}` into number fields and apply the Amitsur differential.

use amitsur::etale::{delta, is_cocycle, ComponentField, EtaleAlgebra, TensorElement};

fn main() {
    // F = Q x Q(sqrt 2)
    let f = EtaleAlgebra::from_ints(&[0, -2, 0, 1]).expect("separable");
    for level in 0..=2 {
        let s = f.splitting(level).expect("splits");
        let quadratic = s.components.iter().filter(|c| c.field != ComponentField::Rational).count();
        println!(
            "F^(x{}): dim {}, {} copies of Q, {} quadratic components",
            level + 1,
            f.dim(level),
            s.components.len() - quadratic,
            quadratic
        );
    }

    let a = TensorElement::from_ints(&f, 1, &[1, 2, 0, -1, 3, 0, 1, 0, 2]).expect("level 1");
    let c = delta(&a).expect("unit");
    println!("a = {a}");
    println!("delta(a) is a cocycle: {}", is_cocycle(&c).expect("level 2"));
    println!("delta(delta(a)) is one: {}", delta(&c).expect("unit").is_one());
}
