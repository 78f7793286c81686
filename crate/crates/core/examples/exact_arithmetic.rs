//! Factor a polynomial over Q and compute a Smith normal form.

use amitsur::exact::snf::{solve_integer, IntegerSolution};
use amitsur::exact::{poly_factor, smith_normal_form, IntMatrix, Polynomial};
use num_bigint::BigInt;

fn main() {
    let p = &Polynomial::from_ints(&[6, -5, -1, 1]) * &Polynomial::from_ints(&[2, 0, 1]);
    println!("P = {p}");
    for (f, e) in poly_factor(&p) {
        println!("  factor {f}  ^{e}");
    }

    let m = IntMatrix::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, -4, -16]);
    let snf = smith_normal_form(&m);
    println!("invariants {:?}, rank {}", snf.invariants, snf.rank);
    assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);

    let b: Vec<BigInt> = [2, 6, 10].iter().map(|&x| BigInt::from(x)).collect();
    match solve_integer(&m, &b).expect("shapes agree") {
        IntegerSolution::Solved(x) => println!("M x = {b:?} has x = {x:?}"),
        IntegerSolution::Insoluble { .. } => println!("M x = {b:?} has no integer solution"),
    }
}
