//! Run the band-shape property suite and print the report.
//!
//! Usage: cargo run --release --example verify_properties [-- V [n_pairs]]
//!
//! Below V₂ the suite checks the full joined-pair picture: real parts
//! confined to disjoint components, one interior singularity per pair found
//! two independent ways, conjugate nonreal arcs, separated components, no
//! closed curves. Past V₂ the structural checks adapt to the collapsed
//! first component.

use ptband::bands::verify_properties;
use ptband::potential::coupling_from_strength;

fn main() {
    let mut args = std::env::args().skip(1);
    let v: f64 = args
        .next()
        .map(|s| s.parse().expect("V must be a number"))
        .unwrap_or(0.7);
    let n_pairs: usize = args
        .next()
        .map(|s| s.parse().expect("pair count"))
        .unwrap_or(3);
    let a = coupling_from_strength(v).expect("valid strength");
    let report = verify_properties(a, n_pairs).expect("suite runs");
    println!("V = {v}, a = {a}\n");
    for c in &report.checks {
        println!("[{}] {:<34} {}", if c.pass { "ok " } else { "FAIL" }, c.name, c.detail);
    }
    println!(
        "\n{} of {} checks pass",
        report.checks.iter().filter(|c| c.pass).count(),
        report.checks.len()
    );
    std::process::exit(if report.pass() { 0 } else { 1 });
}
