//! Trace the first Bloch bands and print plotter-friendly rows.
//!
//! Usage: cargo run --example band_structure [-- V [n_bands]]
//!
//! At V = 0.85 the first two bands still carry a short real segment that
//! merges at the interior spectral singularity Λ₁ before both arcs leave
//! the axis as complex conjugates — the classic picture of a PT lattice
//! below its symmetry-breaking point.

use ptband::bands::trace_bands;
use ptband::potential::coupling_from_strength;

fn main() {
    let mut args = std::env::args().skip(1);
    let v: f64 = args
        .next()
        .map(|s| s.parse().expect("V must be a number"))
        .unwrap_or(0.85);
    let n_bands: usize = args
        .next()
        .map(|s| s.parse().expect("band count"))
        .unwrap_or(2);
    let a = coupling_from_strength(v).expect("valid strength");
    let bands = trace_bands(a, n_bands, 128).expect("tracing succeeds");

    println!("# V = {v}, a = {a}");
    for b in &bands {
        println!(
            "# band {}: starts at λ_{} = {:.9}, ends at λ_{} = {:.9}{:+.9}i",
            b.index,
            b.endpoint_0.index,
            b.endpoint_0.value.re,
            b.endpoint_pi.index,
            b.endpoint_pi.value.re,
            b.endpoint_pi.value.im
        );
        if let Some(s) = b.singularity {
            println!(
                "#   joins its partner at Λ_{} = {:.9} (t = {:.6})",
                s.n, s.lambda, s.t
            );
        }
    }
    println!("band,t,re,im");
    for b in &bands {
        for p in &b.samples {
            println!("{},{:.8},{:.12},{:.12}", b.index, p.t, p.mu.re, p.mu.im);
        }
    }
}
