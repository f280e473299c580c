//! Locate the critical strengths V₁, V₂, V₃ at which successive band pairs
//! lose their real parts.
//!
//! Usage: cargo run --release --example critical_points
//!
//! V₂ comes from the characteristic-series route with a certified bracket;
//! V₃ from the truncated-matrix route tracking the colliding PD pair. At
//! each point the collision is confirmed through the discriminant: a double
//! Bloch eigenvalue forces F′ = 0.

use ptband::critical::{find_vk, verify_critical, DEFAULT_V_MAX, DEFAULT_V_TOL};

fn main() {
    for k in 1..=3usize {
        match find_vk(k, DEFAULT_V_TOL.max(1e-9), DEFAULT_V_MAX) {
            Ok(cp) => {
                println!("V_{k} = {:.12}", cp.v);
                println!("  bracket  [{:.12}, {:.12}]", cp.bracket.0, cp.bracket.1);
                println!("  coupling a = {:.10}i   (a² = {:.10})", cp.r, -cp.r * cp.r);
                println!(
                    "  colliding pair λ_{} = λ_{}",
                    cp.collided_pair.0, cp.collided_pair.1
                );
                if k >= 2 {
                    let ver = verify_critical(&cp).expect("verification");
                    println!(
                        "  |gap| at collision = {:.3e},  |F′| there = {:.3e}",
                        ver.gap_abs,
                        ver.f_prime_at_collision.norm()
                    );
                }
            }
            Err(e) => println!("V_{k}: {e}"),
        }
        println!();
    }
}
