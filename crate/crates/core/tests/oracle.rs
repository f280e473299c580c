//! Cross-oracle invariants: properties that tie the independent computation
//! routes (monodromy integration, Fourier matrices, characteristic series)
//! to each other and to structural facts of the operator family.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use ptband::critical::gap_indicator;
use ptband::discriminant::{
    bloch_roots, discriminant_grid, hill_discriminant, monodromy, Rect, DEFAULT_TOL,
};
use ptband::operator::{family_eigenvalues, quasiperiodic_matrix_eigenvalues, SymmetryClass};
use ptband::series::pn_roots_in_d9;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fuzzy_sort(v: &mut [Complex64]) {
    v.sort_by(|x, y| {
        let d = x.re - y.re;
        if d.abs() > 1e-10 * (1.0 + x.re.abs().max(y.re.abs())) {
            d.partial_cmp(&0.0).unwrap()
        } else {
            x.im.partial_cmp(&y.im).unwrap()
        }
    });
}

#[test]
fn wronskian_holds_on_random_samples() {
    // the monodromy integrator rejects any sample whose relative Wronskian
    // defect exceeds 100·tol; the explicit assertion here uses the same
    // scale, since the unit Wronskian emerges from cancellation of products
    // of size e^{π√|λ|} deep in the left half plane
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let a = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if a.norm() > 2.0 {
            continue;
        }
        let lam = c64(rng.gen_range(-100.0..100.0), rng.gen_range(-40.0..40.0));
        if lam.norm() > 100.0 {
            continue;
        }
        let m = monodromy(a, lam, 1e-10).unwrap();
        let scale = 1.0
            + (m.theta_pi * m.phi_prime_pi).norm()
            + (m.theta_prime_pi * m.phi_pi).norm();
        assert!((m.wronskian() - 1.0).norm() < 1e-8 * scale);
    }
}

#[test]
fn discriminant_is_real_on_a_fine_real_grid() {
    for &ca in &[0.9, 1.5] {
        let a = c64(0.0, ca);
        let lambdas: Vec<Complex64> = (0..500)
            .map(|j| c64(-5.0 + 55.0 * j as f64 / 499.0, 0.0))
            .collect();
        let values = discriminant_grid(a, &lambdas, DEFAULT_TOL).unwrap();
        let max_im = values.iter().map(|d| d.f.im.abs()).fold(0.0, f64::max);
        assert!(max_im < 1e-9, "max |Im F| = {max_im:.3e} at c = {ca}");
    }
}

#[test]
fn discriminant_stays_above_minus_two_for_imaginary_coupling() {
    // all antiperiodic eigenvalues are nonreal, so the graph of F over the
    // real axis never reaches the line −2
    for &ca in &[0.5, 1.0, 1.9] {
        let a = c64(0.0, ca);
        let lambdas: Vec<Complex64> = (0..200)
            .map(|j| c64(-5.0 + 65.0 * j as f64 / 199.0, 0.0))
            .collect();
        let values = discriminant_grid(a, &lambdas, DEFAULT_TOL).unwrap();
        let min_f = values.iter().map(|d| d.f.re).fold(f64::INFINITY, f64::min);
        assert!(min_f > -2.0, "min F = {min_f} at c = {ca}");
    }
}

#[test]
fn interior_quasimomentum_roots_match_the_matrix_oracle() {
    let rect = Rect::new(-8.0, 30.0, -6.0, 6.0);
    for &a in &[c64(0.0, 0.8), c64(0.5, 0.0)] {
        for &t in &[0.3 * PI, 0.7 * PI] {
            let mut ode: Vec<Complex64> = bloch_roots(a, t, rect, 1e-10)
                .unwrap()
                .into_iter()
                .filter(|z| z.norm() < 30.0)
                .collect();
            let mut mat: Vec<Complex64> = quasiperiodic_matrix_eigenvalues(a, t, 24, 30.0)
                .unwrap()
                .into_iter()
                .filter(|z| z.norm() < 30.0)
                .collect();
            fuzzy_sort(&mut ode);
            fuzzy_sort(&mut mat);
            assert_eq!(ode.len(), mat.len(), "a = {a}, t = {t}");
            for (x, y) in ode.iter().zip(mat.iter()) {
                assert!(
                    (x - y).norm() < 1e-8,
                    "a = {a}, t = {t}: {x} vs {y}"
                );
            }
        }
    }
}

#[test]
fn series_roots_match_matrix_pn_eigenvalues() {
    let a = c64(0.0, 1.2);
    let (l0, l2m) = pn_roots_in_d9(a, 1e-12).unwrap();
    let pn = family_eigenvalues(true, a, 32, 20.0)
        .unwrap()
        .into_iter()
        .filter(|e| e.class == SymmetryClass::PN)
        .map(|e| e.value)
        .collect::<Vec<_>>();
    let d0 = pn.iter().map(|z| (z - l0).norm()).fold(f64::INFINITY, f64::min);
    let d2 = pn.iter().map(|z| (z - l2m).norm()).fold(f64::INFINITY, f64::min);
    assert!(d0 < 1e-7, "λ₀ off by {d0:.2e}");
    assert!(d2 < 1e-7, "λ₂⁻ off by {d2:.2e}");
}

#[test]
fn gap_indicator_changes_sign_exactly_once_across_i2() {
    let mut signs = Vec::new();
    for j in 0..50 {
        let ca = 0.05 + 1.9 * j as f64 / 49.0;
        let g = gap_indicator(c64(0.0, ca)).unwrap();
        signs.push(g.delta_sq > 0.0);
    }
    let flips = signs.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(flips, 1, "gap indicator sign pattern: {signs:?}");
}

#[test]
fn antiperiodic_nonreality_persists_across_i2() {
    // conjugate antiperiodic pairs and real higher periodic pairs; sampled
    // where the nonreal parts exceed the reality resolution inside |λ| < 60
    for j in 0..10 {
        let ca = 1.3 + 0.65 * j as f64 / 9.0;
        let a = c64(0.0, ca);
        let anti = family_eigenvalues(false, a, 32, 60.0).unwrap();
        for pair in anti.chunks(2) {
            if pair.len() == 2 {
                assert!(
                    pair[0].value.im < 0.0 && pair[1].value.im > 0.0,
                    "ca = {ca}: pair {} / {}",
                    pair[0].value,
                    pair[1].value
                );
                assert!((pair[0].value - pair[1].value.conj()).norm() < 1e-8);
            }
        }
        let per = family_eigenvalues(true, a, 32, 60.0).unwrap();
        for ev in per.iter().filter(|e| e.index.n >= 4) {
            assert!(
                ev.value.im.abs() < 1e-9,
                "ca = {ca}: λ_{} = {} should be real",
                ev.index,
                ev.value
            );
        }
    }
}

#[test]
fn membership_tests_against_component_structure() {
    // inside the first component the discriminant sits strictly inside
    // (−2, 2); inside the first gap it exceeds 2; left of the spectrum it
    // exceeds 2 as well
    let a = c64(0.0, 1.0);
    let per = family_eigenvalues(true, a, 32, 30.0).unwrap();
    let (l0, l2m, l2p) = (per[0].value.re, per[1].value.re, per[2].value.re);
    let mid_in = 0.5 * (l0 + l2m);
    let d = hill_discriminant(a, c64(mid_in, 0.0), DEFAULT_TOL).unwrap();
    assert!(d.f.re > -2.0 && d.f.re < 2.0);
    let mid_gap = 0.5 * (l2m + l2p);
    let d = hill_discriminant(a, c64(mid_gap, 0.0), DEFAULT_TOL).unwrap();
    assert!(d.f.re > 2.0);
    let d = hill_discriminant(a, c64(l0 - 1.0, 0.0), DEFAULT_TOL).unwrap();
    assert!(d.f.re > 2.0);
}
