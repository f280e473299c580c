//! Scan the Hill discriminant over a real λ window.
//!
//! Usage: cargo run --example discriminant_scan [-- V]
//!
//! The real spectrum is exactly the set where −2 ≤ F(λ) ≤ 2. For imaginary
//! coupling F never descends to −2 (the antiperiodic eigenvalues are
//! nonreal), so the graph weaves between the band intervals touching +2 at
//! every periodic eigenvalue.

use num_complex::Complex64;
use ptband::discriminant::{discriminant_grid, DEFAULT_TOL};
use ptband::potential::coupling_from_strength;

fn main() {
    let v: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("V must be a number"))
        .unwrap_or(0.75);
    let a = coupling_from_strength(v).expect("valid strength");
    let lambdas: Vec<Complex64> = (0..240)
        .map(|j| Complex64::new(-4.0 + 44.0 * j as f64 / 239.0, 0.0))
        .collect();
    let values = discriminant_grid(a, &lambdas, DEFAULT_TOL).expect("integration succeeds");
    println!("# V = {v}, a = {a}");
    println!("lambda,f_re,f_im,in_spectrum");
    for d in &values {
        println!(
            "{:.6},{:.9},{:.2e},{}",
            d.lambda.re,
            d.f.re,
            d.f.im,
            (-2.0..=2.0).contains(&d.f.re)
        );
    }
}
