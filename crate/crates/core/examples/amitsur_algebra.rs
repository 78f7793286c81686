//! Multiply in `A(F, c)` and identify `A(F, 1)` with a matrix algebra.

use amitsur::amitsur::{amitsur_mul, amitsur_unit, trivial_matrix_iso, Cocycle2};
use amitsur::etale::{EtaleAlgebra, TensorElement};
use amitsur::exact::{format_rational, RationalMatrix};

fn show(m: &RationalMatrix) -> String {
    let rows: Vec<String> = (0..m.rows)
        .map(|i| m.row(i).iter().map(format_rational).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn main() {
    let f = EtaleAlgebra::from_ints(&[-2, 0, 1]).expect("separable");
    let one = Cocycle2::trivial(&f);
    let x = TensorElement::from_ints(&f, 1, &[1, 2, 0, 1]).unwrap();
    let y = TensorElement::from_ints(&f, 1, &[0, 1, -1, 3]).unwrap();
    let xy = amitsur_mul(&x, &y, &one).unwrap();

    let (mx, my, mxy) = (trivial_matrix_iso(&x).unwrap(), trivial_matrix_iso(&y).unwrap(), trivial_matrix_iso(&xy).unwrap());
    println!("x  -> {}", show(&mx));
    println!("y  -> {}", show(&my));
    assert_eq!(mx.try_mul(&my).unwrap(), mxy);
    println!("product respected; unit maps to identity: {}", trivial_matrix_iso(&amitsur_unit(&one).unwrap()).unwrap().is_identity());
}
