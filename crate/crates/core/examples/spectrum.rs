//! Periodic and antiperiodic eigenvalues with their symmetry classes.
//!
//! Usage: cargo run --example spectrum [-- V]
//!
//! For V < 1/2 every eigenvalue is real and the classical interlacing holds;
//! past the threshold the antiperiodic values leave the real axis in
//! conjugate pairs, and past V₂ ≈ 0.888437 the first two periodic ones
//! follow.

use ptband::operator::{antiperiodic_eigenvalues, periodic_eigenvalues};
use ptband::potential::coupling_from_strength;

fn main() {
    let v: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("V must be a number"))
        .unwrap_or(0.7);
    let a = coupling_from_strength(v).expect("valid strength");
    println!("V = {v},  coupling a = {a}");
    println!();
    for (family, list) in [
        ("periodic (t = 0)", periodic_eigenvalues(a, 32).unwrap()),
        ("antiperiodic (t = π)", antiperiodic_eigenvalues(a, 32).unwrap()),
    ] {
        println!("{family}:");
        println!("{:>6} {:>5} {:>22} {:>22}  localization disc", "label", "class", "Re λ", "Im λ");
        for e in list.iter().filter(|e| e.value.norm() < 60.0) {
            println!(
                "{:>6} {:>5} {:>22.12} {:>22.12}  |λ − {}| ≤ {:.3}",
                format!("λ_{}", e.index),
                e.class,
                e.value.re,
                e.value.im,
                e.disc_center,
                e.disc_radius
            );
        }
        println!();
    }
}
