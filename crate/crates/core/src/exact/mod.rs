//! Exact arithmetic substrate: rationals, polynomials, factorisation, and
//! linear algebra over Q and Z.

pub mod factor;
pub mod integer;
pub mod matrix;
pub mod modular;
pub mod poly;
pub mod rational;
pub mod snf;

pub use factor::{is_irreducible, poly_factor};
pub use matrix::{solve_linear, LinearSolution, RationalMatrix};
pub use poly::{is_separable, poly_gcd, Polynomial};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use snf::{lattice_basis, smith_normal_form, IntMatrix, SmithForm};
