//! Acceptance suite: every reference claim the library is built to
//! reproduce, one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

use ptband::bands::{real_components, verify_properties};
use ptband::critical::{find_v2, DEFAULT_V_TOL};
use ptband::discriminant::{bloch_roots, Rect};
use ptband::operator::{family_eigenvalues, EigenIndex};
use ptband::polyapprox::{
    circle_points, q_eval, reference_circles, roots_p, A_SQ_CONJ_PAIR, A_SQ_REAL_PAIR,
};
use ptband::potential::coupling_from_strength;
use ptband::series::{characteristic_n, remainder_bound, series_term, sharp_tail_components};

struct Criterion {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sort_complex(v: &mut [Complex64]) {
    // conjugate pairs share their real part up to float noise; order those
    // by imaginary part so both oracles sort identically
    // the tolerance must sit between conjugate-pair float noise (~1e-12
    // relative) and the narrowest genuine real pair gap the criterion meets
    // (3.5e-8 at the disc-36 pair for a = 0.8i)
    v.sort_by(|x, y| {
        let d = x.re - y.re;
        if d.abs() > 1e-10 * (1.0 + x.re.abs().max(y.re.abs())) {
            d.partial_cmp(&0.0).unwrap()
        } else {
            x.im.partial_cmp(&y.im).unwrap()
        }
    });
}

// ---------------------------------------------------------------- criterion 1

fn second_critical_point() -> Criterion {
    let start = Instant::now();
    let result = find_v2(DEFAULT_V_TOL);
    let elapsed = start.elapsed().as_secs_f64();
    match result {
        Ok(cp) => {
            let (lo, hi) = cp.bracket;
            let a_sq = -cp.r * cp.r;
            let pass = lo > 0.8884370025
                && hi < 0.8884370117
                && (hi - lo) <= 1e-8
                && a_sq > -2.157281295
                && a_sq < -2.15728123
                && cp.collided_pair == (EigenIndex::zero(), EigenIndex::minus(2))
                && elapsed < 30.0;
            Criterion {
                name: "1 second critical point bracket",
                pass,
                detail: format!(
                    "V2 in [{lo:.12}, {hi:.12}] (width {:.2e}), a² = {a_sq:.12}, {elapsed:.2} s",
                    hi - lo
                ),
            }
        }
        Err(e) => Criterion {
            name: "1 second critical point bracket",
            pass: false,
            detail: format!("failed: {e}"),
        },
    }
}

// ---------------------------------------------------------------- criterion 2

fn reference_polynomial_roots() -> Criterion {
    let tol = 5e-7;
    let real_side = [
        c64(2.088438808, 0.0),
        c64(2.088959036, 0.0),
        c64(15.85581654, 0.0),
        c64(63.99999991, 0.0),
        c64(15.98321016, 0.11878598),
        c64(15.98321016, -0.11878598),
        c64(36.00018270, 0.00333046),
        c64(36.00018270, -0.00333046),
    ];
    let conj_side = [
        c64(2.088698925, 0.000232839),
        c64(2.088698925, -0.000232839),
        c64(15.98321016, 0.11878599),
        c64(15.98321016, -0.11878599),
        c64(15.85581654, 0.0),
        c64(36.00018270, 0.00333046),
        c64(36.00018270, -0.00333046),
        c64(63.99999991, 0.0),
    ];
    let mut worst = 0.0f64;
    for (u, wants) in [(A_SQ_REAL_PAIR, &real_side), (A_SQ_CONJ_PAIR, &conj_side)] {
        let roots = roots_p(u);
        for w in wants {
            let d = roots
                .iter()
                .map(|r| (r - w).norm())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
    }
    Criterion {
        name: "2 degree-8 approximation roots",
        pass: worst < tol,
        detail: format!("worst root deviation {worst:.3e} (tolerance {tol:.0e})"),
    }
}

// ---------------------------------------------------------------- criterion 3

fn rouche_floor_and_tail_bound() -> Criterion {
    let mut min_q = f64::INFINITY;
    for (center, radius) in reference_circles(A_SQ_REAL_PAIR).unwrap() {
        for z in circle_points(center, radius, 360) {
            min_q = min_q.min(q_eval(A_SQ_REAL_PAIR, z).norm());
        }
    }
    let cps = sharp_tail_components();
    // soundness: the actual series tail never exceeds the certified bound
    let mut max_actual = 0.0f64;
    for (u, circles) in [
        (A_SQ_REAL_PAIR, reference_circles(A_SQ_REAL_PAIR).unwrap()),
        (A_SQ_CONJ_PAIR, reference_circles(A_SQ_CONJ_PAIR).unwrap()),
    ] {
        let a = c64(0.0, (-u).sqrt());
        for (center, radius) in circles {
            for z in circle_points(center, radius, 8) {
                let mut sum = 0.0;
                for k in 3..=12 {
                    sum += (z * series_term(a, z, k).unwrap().value).norm();
                }
                max_actual = max_actual.max(sum);
            }
        }
    }
    let pass = min_q > 5e-8
        && cps.total < 4.7357e-8
        && cps.tail_beyond_4 < 4.101e-11
        && cps.a3_bound < 2.2707e-8
        && max_actual <= cps.total;
    Criterion {
        name: "3 Rouché floor and sharpened tail bound",
        pass,
        detail: format!(
            "min |Q| = {min_q:.3e} > 5e-8; bound {:.5e} < 4.7357e-8 (tail>4 {:.3e}, A3 {:.5e}); actual tail {max_actual:.5e}",
            cps.total, cps.tail_beyond_4, cps.a3_bound
        ),
    }
}

// ---------------------------------------------------------------- criterion 4

fn small_coupling_asymptotics() -> Criterion {
    let mut worst_ratio = 0.0f64;
    let mut ok = true;
    for &c in &[0.02f64, 0.05, 0.1] {
        let a = c64(0.0, c);
        let a_sq = -c * c;
        let anti = family_eigenvalues(false, a, 32, 20.0).unwrap();
        let per = family_eigenvalues(true, a, 32, 20.0).unwrap();
        let cap1 = 2.0 * c * c;
        let cap2 = 2.0 * c * c * c;
        let checks = [
            ((anti[0].value - (c64(1.0, 0.0) - a)).norm(), cap1),
            ((anti[1].value - (c64(1.0, 0.0) + a)).norm(), cap1),
            ((per[0].value - (-a_sq / 2.0)).norm(), cap2),
            ((per[1].value - (4.0 + 5.0 / 12.0 * a_sq)).norm(), cap2),
            ((per[2].value - (4.0 - a_sq / 12.0)).norm(), cap2),
        ];
        for (err, cap) in checks {
            ok &= err <= cap;
            worst_ratio = worst_ratio.max(err / cap);
        }
    }
    Criterion {
        name: "4 small-coupling asymptotics",
        pass: ok,
        detail: format!("worst error/cap ratio {worst_ratio:.3}"),
    }
}

// ---------------------------------------------------------------- criterion 5

fn first_threshold() -> Criterion {
    let a_sub = coupling_from_strength(0.49).unwrap();
    let per = family_eigenvalues(true, a_sub, 32, 60.0).unwrap();
    let anti = family_eigenvalues(false, a_sub, 32, 60.0).unwrap();
    let all_real = per
        .iter()
        .chain(anti.iter())
        .all(|e| e.value.im.abs() < 1e-9);
    // classical ordering λ₀ < λ₁⁻ ≤ λ₁⁺ < λ₂⁻ ≤ …; the highest pair gaps sit
    // at the floating-point floor, so ordering is asserted with 1e-10 slack
    let mut merged: Vec<f64> = vec![per[0].value.re];
    let mut ai = anti.iter();
    let mut pi = per.iter().skip(1);
    loop {
        match (ai.next(), ai.next(), pi.next(), pi.next()) {
            (Some(a1), Some(a2), Some(p1), Some(p2)) => merged.extend([
                a1.value.re,
                a2.value.re,
                p1.value.re,
                p2.value.re,
            ]),
            _ => break,
        }
    }
    merged.retain(|&x| x < 60.0);
    let ordered = merged.windows(2).all(|w| w[1] > w[0] - 1e-10);
    let a_super = coupling_from_strength(0.51).unwrap();
    let anti_super = family_eigenvalues(false, a_super, 32, 20.0).unwrap();
    let pair_nonreal = anti_super[0].value.im < -1e-4
        && anti_super[1].value.im > 1e-4
        && (anti_super[0].value - anti_super[1].value.conj()).norm() < 1e-8;
    Criterion {
        name: "5 first threshold at V = 1/2",
        pass: all_real && ordered && pair_nonreal,
        detail: format!(
            "V=0.49: {} real ordered values; V=0.51: λ₁∓ = {:.6}{:+.6}i and conjugate",
            merged.len(),
            anti_super[0].value.re,
            anti_super[0].value.im
        ),
    }
}

// ---------------------------------------------------------------- criterion 6

fn oracle_equivalence() -> Criterion {
    let rect = Rect::new(-8.0, 40.0, -6.0, 6.0);
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut detail = String::new();
    for &a in &[c64(0.5, 0.0), c64(1.0, 0.0), c64(0.0, 0.8), c64(0.0, 1.5)] {
        for (t, periodic) in [(0.0, true), (PI, false)] {
            let mut ode_side: Vec<Complex64> = bloch_roots(a, t, rect, 1e-10)
                .unwrap()
                .into_iter()
                .filter(|z| z.norm() < 40.0)
                .collect();
            let mut matrix_side: Vec<Complex64> = family_eigenvalues(periodic, a, 32, 40.0)
                .unwrap()
                .iter()
                .map(|e| e.value)
                .filter(|z| z.norm() < 40.0)
                .collect();
            sort_complex(&mut ode_side);
            sort_complex(&mut matrix_side);
            if ode_side.len() != matrix_side.len() {
                ok = false;
                detail = format!(
                    "a = {a}, t = {t:.3}: {} discriminant roots vs {} matrix eigenvalues",
                    ode_side.len(),
                    matrix_side.len()
                );
                continue;
            }
            for (x, y) in ode_side.iter().zip(matrix_side.iter()) {
                worst = worst.max((x - y).norm());
            }
        }
    }
    ok &= worst < 1e-8;
    if detail.is_empty() {
        detail = format!("max elementwise deviation {worst:.3e} over 8 (a, t) pairs");
    }
    Criterion {
        name: "6 discriminant/matrix oracle equivalence",
        pass: ok,
        detail,
    }
}

// ---------------------------------------------------------------- criterion 7

fn band_geometry() -> Criterion {
    let a = coupling_from_strength(0.7).unwrap();
    let report = verify_properties(a, 3).unwrap();
    let case1_ok = report.pass();
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();

    let a3 = coupling_from_strength(1.0).unwrap();
    let comps = real_components(a3, 3).unwrap();
    let case3_ok = comps.first().map(|c| c.index == 2).unwrap_or(false) && comps.len() == 2;

    let mut widths = Vec::new();
    for &v in &[0.80, 0.85, 0.88, 0.8884] {
        let comps = real_components(coupling_from_strength(v).unwrap(), 1).unwrap();
        widths.push(comps[0].hi - comps[0].lo);
    }
    let shrinking = widths.windows(2).all(|w| w[1] < w[0]);

    Criterion {
        name: "7 band geometry and component collapse",
        pass: case1_ok && case3_ok && shrinking,
        detail: format!(
            "V=0.7: {}/{} property checks pass{}; V=1.0 first component absent: {case3_ok}; |I1| = {:?}",
            report.checks.iter().filter(|c| c.pass).count(),
            report.checks.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(" (failed: {failed:?})")
            },
            widths
        ),
    }
}

// ---------------------------------------------------------------- criterion 8

fn series_machinery() -> Criterion {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let sample_point = |rng: &mut ChaCha8Rng| -> (Complex64, Complex64) {
        loop {
            let a = c64(rng.gen_range(-1.3..1.3), rng.gen_range(-1.3..1.3));
            let lam = c64(rng.gen_range(-8.0..8.0), rng.gen_range(-3.0..3.0));
            let clear = [16.0, 36.0, 64.0, 100.0]
                .iter()
                .all(|&p| (lam - p).norm() > 0.5);
            if a.norm() < 1.9 && clear {
                return (a, lam);
            }
        }
    };

    // closed forms for A₂, A₃, A₄
    let mut worst_rel = 0.0f64;
    for _ in 0..20 {
        let (a, lam) = sample_point(&mut rng);
        let d16 = lam - 16.0;
        let d36 = lam - 36.0;
        let d64 = lam - 64.0;
        let d100 = lam - 100.0;
        let d144 = lam - 144.0;
        let a2_closed = a.powu(6) / (d16.powu(3) * d36.powu(2))
            + a.powu(6) / (d16.powu(2) * d36.powu(2) * d64);
        let a3_closed = a.powu(8) / (d16.powu(4) * d36.powu(3))
            + a.powu(8) / (d16.powu(2) * d36.powu(3) * d64.powu(2))
            + 2.0 * a.powu(8) / (d16.powu(3) * d36.powu(3) * d64)
            + a.powu(8) / (d16.powu(2) * d36.powu(2) * d64.powu(2) * d100);
        let e4 = a.powu(10) / (d16.powu(2) * d36.powu(2) * d64.powu(2) * d100.powu(2) * d144)
            + a.powu(10) / (d16.powu(2) * d36.powu(2) * d64.powu(3) * d100.powu(2))
            + a.powu(10) / (d16.powu(2) * d36.powu(3) * d64.powu(3) * d100)
            + a.powu(10) / (d16.powu(3) * d36.powu(3) * d64.powu(2) * d100);
        let a_sq = a * a;
        let a4_closed = (a_sq / (d16 * d36) + a_sq / (d64 * d36)) * a3_closed + e4;
        for (k, closed) in [(2usize, a2_closed), (3, a3_closed), (4, a4_closed)] {
            let got = series_term(a, lam, k).unwrap().value;
            worst_rel = worst_rel.max((got - closed).norm() / closed.norm().max(1e-300));
        }
    }
    let closed_ok = worst_rel < 1e-12;

    // derivative consistency against finite differences
    let mut worst_d1 = 0.0f64;
    let mut worst_d2 = 0.0f64;
    for _ in 0..50 {
        let c = rng.gen_range(0.1..1.9);
        let a = c64(0.0, c);
        let lam = c64(rng.gen_range(-7.0..7.0), rng.gen_range(-3.0..3.0));
        let e = characteristic_n(a, lam, 1e-14).unwrap();
        let h1 = 1e-6;
        let ep = characteristic_n(a, lam + h1, 1e-14).unwrap();
        let em = characteristic_n(a, lam - h1, 1e-14).unwrap();
        let fd1 = (ep.n - em.n) / (2.0 * h1);
        worst_d1 = worst_d1.max((fd1 - e.n_d1).norm() / (1.0 + fd1.norm()));
        let h2 = 2e-4;
        let ep = characteristic_n(a, lam + h2, 1e-14).unwrap();
        let em = characteristic_n(a, lam - h2, 1e-14).unwrap();
        let fd2 = (ep.n + em.n - 2.0 * e.n) / (h2 * h2);
        worst_d2 = worst_d2.max((fd2 - e.n_d2).norm() / (1.0 + fd2.norm()));
    }
    let derivatives_ok = worst_d1 < 1e-6 && worst_d2 < 1e-6;

    // summed bounds on the sampled interior of the validity region
    let mut sums_ok = true;
    for _ in 0..10 {
        let a = c64(0.0, rng.gen_range(0.1..1.9));
        let lam = c64(rng.gen_range(-8.0..8.0), rng.gen_range(-2.0..2.0));
        if lam.norm() > 8.5 {
            continue;
        }
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for k in 1..=12 {
            let t = series_term(a, lam, k).unwrap();
            s0 += t.value.norm();
            s1 += t.d1.norm();
            s2 += t.d2.norm();
        }
        sums_ok &= s0 < 0.01 && s1 < 0.005 && s2 < 1.0 / 300.0;
    }

    // elimination remainder bound, exact formula
    let mut remainder_ok = true;
    for m in 1..=8usize {
        remainder_ok &= remainder_bound(m).unwrap() == (4.0 / 7.0) * (16.0f64 / 189.0).powi(m as i32);
    }

    Criterion {
        name: "8 series machinery",
        pass: closed_ok && derivatives_ok && sums_ok && remainder_ok,
        detail: format!(
            "closed-form rel {worst_rel:.2e}; FD rel N′ {worst_d1:.2e} / N″ {worst_d2:.2e}; bounds {} / remainder {}",
            if sums_ok { "hold" } else { "violated" },
            if remainder_ok { "exact" } else { "off" }
        ),
    }
}

#[test]
fn acceptance() {
    let criteria = vec![
        second_critical_point(),
        reference_polynomial_roots(),
        rouche_floor_and_tail_bound(),
        small_coupling_asymptotics(),
        first_threshold(),
        oracle_equivalence(),
        band_geometry(),
        series_machinery(),
    ];
    let mut all_pass = true;
    for c in &criteria {
        println!(
            "ACCEPTANCE {}: {} — {}",
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.detail
        );
        all_pass &= c.pass;
    }
    assert!(all_pass, "acceptance criteria failed");
}
