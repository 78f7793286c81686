//! Full pipeline: scrambled `M_d(Q)` to an explicit isomorphism, then verify.

use amitsur::csa::RngSeed;
use amitsur::pipeline::{explicit_isomorphism, generate_instance, preimage, verify, identity_entries, PipelineOptions, Witness};

fn main() {
    let d: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let witness = if d > 2 { Witness::SplitU } else { Witness::None };
    let inst = generate_instance(d, RngSeed(11), witness).expect("instance");
    let mut opts = PipelineOptions::default();
    opts.present.witness_u = inst.witness_u.clone();
    let cert = explicit_isomorphism(&inst.algebra, RngSeed(11), &opts).expect("split algebra");

    let report = verify(&cert);
    for c in &report.checks {
        println!("{:<16} {}", c.name, if c.passed { "ok" } else { "FAILED" });
    }
    let one = preimage(&cert, &identity_entries(d)).unwrap();
    println!("preimage of the identity is the unit: {}", one == inst.algebra.unit());
}
