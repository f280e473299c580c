//! Monodromy, the Hill discriminant, and Bloch eigenvalues as its level sets.
//!
//! For the Hill equation −y″ + q(x)y = λy with q of period π, the fundamental
//! solutions θ and φ (θ(0) = φ′(0) = 1, θ′(0) = φ(0) = 0) determine the
//! discriminant F(λ) = φ′(π, λ) + θ(π, λ). A point λ belongs to the spectrum
//! of the full-line operator exactly when F(λ) ∈ [−2, 2], and the Bloch
//! eigenvalues for quasimomentum t are the roots of F(λ) = 2cos t.
//!
//! Everything here works in the Mathieu normalization q = 2a·cos2x, which
//! shares its discriminant with the PT-symmetric optical potential through
//! the coupling reduction (see [`crate::potential`]). PT symmetry of that
//! representative forces F to be real on the real axis and the root sets to
//! be closed under conjugation, both of which are asserted by the test suite
//! rather than assumed.
//!
//! Because the Mathieu potential is even, the monodromy factorizes over the
//! half period h = π/2:
//!
//! ```text
//! F(λ) − 2 = 4·θ′(h, λ)·φ(h, λ),      F(λ) + 2 = 4·θ(h, λ)·φ′(h, λ),
//! ```
//!
//! so the periodic spectrum splits into the simple roots of θ′(h, ·) (PN) and
//! φ(h, ·) (PD), and the antiperiodic spectrum into the roots of φ′(h, ·)
//! (AD) and θ(h, ·) (AN). The factor functions stay well conditioned where
//! F ∓ 2 itself has nearly double roots, which is what makes this module a
//! trustworthy independent oracle for the matrix solvers.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Result, SpectralError};
use crate::ode::{shoot, ShootingData};
use crate::operator::SymmetryClass;

/// Default integration tolerance (relative and absolute).
pub const DEFAULT_TOL: f64 = 1e-12;

// ============================================================================
// Monodromy and discriminant values
// ============================================================================

/// Values of the fundamental solutions at x = π.
#[derive(Debug, Clone, Copy)]
pub struct Monodromy {
    pub theta_pi: Complex64,
    pub theta_prime_pi: Complex64,
    pub phi_pi: Complex64,
    pub phi_prime_pi: Complex64,
    pub lambda: Complex64,
    pub a: Complex64,
}

impl Monodromy {
    /// θ(π)·φ′(π) − θ′(π)·φ(π); identically 1 for the exact flow.
    pub fn wronskian(&self) -> Complex64 {
        self.theta_pi * self.phi_prime_pi - self.theta_prime_pi * self.phi_pi
    }

    /// The Hill discriminant F(λ) = φ′(π, λ) + θ(π, λ).
    pub fn discriminant(&self) -> Complex64 {
        self.phi_prime_pi + self.theta_pi
    }
}

/// Discriminant value together with its λ-derivative.
#[derive(Debug, Clone, Copy)]
pub struct DiscriminantValue {
    pub lambda: Complex64,
    pub f: Complex64,
    pub f_prime: Complex64,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(SpectralError::Domain(format!(
            "integration tolerance must lie in (0, 1e-6], got {tol}"
        )));
    }
    Ok(())
}

/// Integrate the fundamental system and return the monodromy data at π.
///
/// The Wronskian defect is checked against 100·tol relative to the size of
/// the products θφ′ and θ′φ: deep in the left half plane the fundamental
/// solutions grow like e^{π√|λ|} and the unit Wronskian emerges from the
/// cancellation of two such products, so an absolute defect bound is not
/// attainable in double precision there.
pub fn monodromy(a: Complex64, lambda: Complex64, tol: f64) -> Result<Monodromy> {
    check_tol(tol)?;
    let d = shoot(a, lambda, tol)?;
    let m = Monodromy {
        theta_pi: d.at_pi[0],
        theta_prime_pi: d.at_pi[1],
        phi_pi: d.at_pi[2],
        phi_prime_pi: d.at_pi[3],
        lambda,
        a,
    };
    let scale = 1.0 + (m.theta_pi * m.phi_prime_pi).norm() + (m.theta_prime_pi * m.phi_pi).norm();
    let defect = (m.wronskian() - 1.0).norm();
    if defect > 100.0 * tol * scale {
        return Err(SpectralError::Integration {
            lambda,
            reason: format!("relative Wronskian defect {:.3e} exceeds 100·tol", defect / scale),
        });
    }
    Ok(m)
}

/// F(λ) and F′(λ), the derivative coming from the variational flow.
pub fn hill_discriminant(a: Complex64, lambda: Complex64, tol: f64) -> Result<DiscriminantValue> {
    check_tol(tol)?;
    let d = shoot(a, lambda, tol)?;
    Ok(DiscriminantValue {
        lambda,
        f: d.at_pi[0] + d.at_pi[3],
        f_prime: d.at_pi[4] + d.at_pi[7],
    })
}

/// Evaluate the discriminant on many λ in parallel.
pub fn discriminant_grid(
    a: Complex64,
    lambdas: &[Complex64],
    tol: f64,
) -> Result<Vec<DiscriminantValue>> {
    lambdas
        .par_iter()
        .map(|&l| hill_discriminant(a, l, tol))
        .collect()
}

/// Real-spectrum membership test: λ ∈ σ(H) ∩ ℝ iff F(λ) ∈ [−2 − tol, 2 + tol].
pub fn real_spectrum_membership(a: Complex64, lambda: f64, tol: f64) -> Result<bool> {
    let d = hill_discriminant(a, Complex64::new(lambda, 0.0), DEFAULT_TOL)?;
    Ok(d.f.re >= -2.0 - tol && d.f.re <= 2.0 + tol)
}

// ============================================================================
// Half-period boundary functions
// ============================================================================

/// Value and λ-derivative of the half-period boundary function whose zeros
/// are the eigenvalues of `class`.
pub fn boundary_function(
    class: SymmetryClass,
    a: Complex64,
    lambda: Complex64,
    tol: f64,
) -> Result<(Complex64, Complex64)> {
    check_tol(tol)?;
    let d = shoot(a, lambda, tol)?;
    Ok(pick_boundary(class, &d))
}

fn pick_boundary(class: SymmetryClass, d: &ShootingData) -> (Complex64, Complex64) {
    match class {
        SymmetryClass::PN => (d.at_half[1], d.at_half[5]), // θ′(h)
        SymmetryClass::PD => (d.at_half[2], d.at_half[6]), // φ(h)
        SymmetryClass::AD => (d.at_half[3], d.at_half[7]), // φ′(h)
        SymmetryClass::AN => (d.at_half[0], d.at_half[4]), // θ(h)
    }
}

// ============================================================================
// Winding numbers and root finding
// ============================================================================

/// Axis-aligned search rectangle in the λ plane.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Rect {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    fn boundary(&self, samples_per_side: usize) -> Vec<Complex64> {
        let corners = [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ];
        let mut pts = Vec::with_capacity(4 * samples_per_side);
        for i in 0..4 {
            let from = corners[i];
            let to = corners[(i + 1) % 4];
            for j in 0..samples_per_side {
                let s = j as f64 / samples_per_side as f64;
                pts.push(from + (to - from) * s);
            }
        }
        pts
    }
}

/// Count zeros of a holomorphic function inside a closed contour by tracking
/// the argument of f along it.
///
/// Segments whose phase jump exceeds π/2 are bisected until the total
/// winding is resolved; failure to resolve within the evaluation budget
/// indicates a zero on or hugging the contour.
pub fn winding_number<F>(f: &F, contour: &[Complex64]) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut pts: Vec<Complex64> = contour.to_vec();
    pts.push(contour[0]);
    let mut vals = Vec::with_capacity(pts.len());
    for &p in &pts {
        vals.push(f(p)?);
    }
    let mut budget = 20_000usize;
    let mut total = 0.0f64;
    let mut stack: Vec<(Complex64, Complex64, Complex64, Complex64, u32)> = Vec::new();
    for i in (0..pts.len() - 1).rev() {
        stack.push((pts[i], vals[i], pts[i + 1], vals[i + 1], 0));
    }
    while let Some((z0, f0, z1, f1, depth)) = stack.pop() {
        if f0.norm() == 0.0 || f1.norm() == 0.0 {
            return Err(SpectralError::ModelViolation(
                "winding contour passes through a zero".into(),
            ));
        }
        let dphi = (f1 / f0).arg();
        if dphi.abs() <= std::f64::consts::FRAC_PI_2 && depth >= 1 {
            total += dphi;
            continue;
        }
        if depth >= 40 || budget == 0 {
            return Err(SpectralError::ModelViolation(
                "winding refinement exhausted; zero too close to the contour".into(),
            ));
        }
        budget -= 1;
        let zm = 0.5 * (z0 + z1);
        let fm = f(zm)?;
        stack.push((zm, fm, z1, f1, depth + 1));
        stack.push((z0, f0, zm, fm, depth + 1));
    }
    let w = total / (2.0 * PI);
    let rounded = w.round();
    if (w - rounded).abs() > 0.25 {
        return Err(SpectralError::ModelViolation(format!(
            "winding number {w:.4} is not close to an integer"
        )));
    }
    Ok(rounded as i64)
}

/// Count zeros of f inside `rect`.
pub fn count_zeros_in_rect<F>(f: &F, rect: Rect) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    winding_number(f, &rect.boundary(16))
}

/// Newton iteration on (f, f′); returns the converged point or None.
fn newton_root<F>(f: &F, mut z: Complex64, tol: f64, max_iter: usize) -> Option<Complex64>
where
    F: Fn(Complex64) -> Result<(Complex64, Complex64)>,
{
    for _ in 0..max_iter {
        let (v, dv) = f(z).ok()?;
        if dv.norm() == 0.0 {
            return None;
        }
        let step = v / dv;
        z -= step;
        if !z.re.is_finite() || !z.im.is_finite() {
            return None;
        }
        if step.norm() < tol {
            return Some(z);
        }
    }
    None
}

fn dedupe(mut roots: Vec<Complex64>, radius: f64) -> Vec<Complex64> {
    roots.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    let mut out: Vec<Complex64> = Vec::new();
    for r in roots {
        if out.iter().all(|o| (o - r).norm() > radius) {
            out.push(r);
        }
    }
    out
}

/// Find all zeros of a holomorphic function in `rect` by grid-seeded Newton
/// iteration, certified by the argument principle.
///
/// The grid is refined up to three times if Newton from the current seeds
/// recovers fewer roots than the winding count demands.
pub fn certified_roots<F>(f: &F, rect: Rect, tol: f64) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Result<(Complex64, Complex64)> + Sync,
{
    let expected = count_zeros_in_rect(&|z| f(z).map(|p| p.0), rect)?;
    let mut spacing_re = 1.4f64;
    let mut spacing_im = 1.1f64;
    for _ in 0..4 {
        let mut seeds = Vec::new();
        let mut re = rect.re_min + 0.5 * spacing_re;
        while re < rect.re_max {
            let mut im = rect.im_min + 0.37 * spacing_im;
            while im < rect.im_max {
                seeds.push(Complex64::new(re, im));
                im += spacing_im;
            }
            re += spacing_re;
        }
        let roots: Vec<Complex64> = seeds
            .par_iter()
            .filter_map(|&s| newton_root(f, s, tol, 30))
            .filter(|z| rect.contains(*z))
            .collect();
        let roots = dedupe(roots, 10.0 * tol);
        if roots.len() as i64 == expected {
            return Ok(roots);
        }
        spacing_re *= 0.5;
        spacing_im *= 0.5;
    }
    Err(SpectralError::MissedRoot {
        re_min: rect.re_min,
        re_max: rect.re_max,
        im_min: rect.im_min,
        im_max: rect.im_max,
        expected,
        found: 0,
    })
}

// ============================================================================
// Bloch roots
// ============================================================================

/// All Bloch eigenvalues for quasimomentum t inside `rect`: the roots of
/// F(λ) = 2cos t.
///
/// At the periodic and antiperiodic ends the half-period factorization is
/// used, so each symmetry class is resolved as simple roots of its own entire
/// function; at interior t the equation is solved directly. Either way the
/// root count is certified with the argument principle and roots closer than
/// 10·tol are merged.
pub fn bloch_roots(a: Complex64, t: f64, rect: Rect, tol: f64) -> Result<Vec<Complex64>> {
    if !(0.0..=PI).contains(&t) {
        return Err(SpectralError::Domain(format!(
            "quasimomentum must lie in [0, π], got {t}"
        )));
    }
    check_tol(tol)?;
    let end_eps = 1e-12;
    if t.abs() < end_eps || (PI - t).abs() < end_eps {
        let classes = if t.abs() < end_eps {
            [SymmetryClass::PN, SymmetryClass::PD]
        } else {
            [SymmetryClass::AD, SymmetryClass::AN]
        };
        // Simple roots of each factor, concatenated without cross-class
        // merging: a periodic eigenvalue can be a PN and a PD value at once
        // only at a = 0, where the double multiplicity is genuine.
        let mut all = Vec::new();
        for class in classes {
            let f = |z: Complex64| -> Result<(Complex64, Complex64)> {
                let d = shoot(a, z, tol)?;
                Ok(pick_boundary(class, &d))
            };
            all.extend(certified_roots(&f, rect, tol)?);
        }
        all.sort_by(|x, y| {
            x.re.partial_cmp(&y.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal))
        });
        Ok(all)
    } else {
        let w = Complex64::new(2.0 * t.cos(), 0.0);
        let f = |z: Complex64| -> Result<(Complex64, Complex64)> {
            let d = shoot(a, z, tol)?;
            Ok((d.at_pi[0] + d.at_pi[3] - w, d.at_pi[4] + d.at_pi[7]))
        };
        certified_roots(&f, rect, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_monodromy_closed_forms() {
        // λ = 4: θ(π) = cos 2π = 1, φ′(π) = 1, F = 2.
        let m = monodromy(c(0.0, 0.0), c(4.0, 0.0), 1e-12).unwrap();
        assert!((m.theta_pi - 1.0).norm() < 1e-10);
        assert!((m.phi_prime_pi - 1.0).norm() < 1e-10);
        assert!((m.discriminant() - 2.0).norm() < 1e-10);
        // λ = 1: F = 2cos π = −2.
        let m = monodromy(c(0.0, 0.0), c(1.0, 0.0), 1e-12).unwrap();
        assert!((m.discriminant() + 2.0).norm() < 1e-10);
        // λ = 0: θ ≡ 1, φ = x.
        let m = monodromy(c(0.0, 0.0), c(0.0, 0.0), 1e-12).unwrap();
        assert!((m.theta_pi - 1.0).norm() < 1e-10);
        assert!((m.phi_pi - PI).norm() < 1e-10);
        assert!((m.discriminant() - 2.0).norm() < 1e-10);
    }

    #[test]
    fn free_discriminant_matches_cosine() {
        for &lam in &[0.3, 2.0, 7.5, 21.0, 33.3] {
            let d = hill_discriminant(c(0.0, 0.0), c(lam, 0.0), 1e-12).unwrap();
            let want = 2.0 * (PI * lam.sqrt()).cos();
            assert!((d.f.re - want).abs() < 1e-9, "λ={lam}");
            assert!(d.f.im.abs() < 1e-10);
            // F' against the closed form −π sin(π√λ)/√λ
            let want_d = -PI * (PI * lam.sqrt()).sin() / lam.sqrt();
            assert!((d.f_prime.re - want_d).abs() < 1e-8);
        }
    }

    #[test]
    fn discriminant_is_real_on_the_real_axis_for_imaginary_coupling() {
        let a = c(0.0, 1.3);
        for k in 0..40 {
            let lam = -5.0 + 55.0 * k as f64 / 39.0;
            let d = hill_discriminant(a, c(lam, 0.0), 1e-12).unwrap();
            assert!(d.f.im.abs() < 1e-9, "Im F = {} at λ = {lam}", d.f.im);
        }
    }

    #[test]
    fn discriminant_conjugation_symmetry() {
        let a = c(0.0, 0.9);
        for &(re, im) in &[(3.0, 1.2), (-1.0, 0.5), (12.0, -2.0)] {
            let d1 = hill_discriminant(a, c(re, im), 1e-12).unwrap();
            let d2 = hill_discriminant(a, c(re, -im), 1e-12).unwrap();
            assert!((d1.f.conj() - d2.f).norm() < 1e-9);
        }
    }

    #[test]
    fn free_periodic_bloch_roots() {
        let roots = bloch_roots(
            c(0.0, 0.0),
            0.0,
            Rect::new(-2.0, 40.0, -2.0, 2.0),
            1e-10,
        )
        .unwrap();
        let want = [0.0, 4.0, 4.0, 16.0, 16.0, 36.0, 36.0];
        assert_eq!(roots.len(), want.len());
        let mut res: Vec<f64> = roots.iter().map(|z| z.re).collect();
        res.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (r, w) in res.iter().zip(want) {
            assert!((r - w).abs() < 1e-7, "{r} vs {w}");
        }
    }

    #[test]
    fn antiperiodic_pair_splits_linearly_in_a() {
        let a = c(0.0, 0.01);
        let roots = bloch_roots(a, PI, Rect::new(-1.0, 3.0, -1.0, 1.0), 1e-11).unwrap();
        assert_eq!(roots.len(), 2);
        let mut roots = roots;
        roots.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert!((roots[0] - (c(1.0, 0.0) - a)).norm() < 2e-4);
        assert!((roots[1] - (c(1.0, 0.0) + a)).norm() < 2e-4);
    }

    #[test]
    fn membership_outside_the_first_band_is_false_for_free_case() {
        // Free case: spectrum is [0, ∞).
        assert!(!real_spectrum_membership(c(0.0, 0.0), -0.5, 1e-9).unwrap());
        assert!(real_spectrum_membership(c(0.0, 0.0), 2.0, 1e-9).unwrap());
    }

    #[test]
    fn winding_counts_simple_polynomial_zeros() {
        let f = |z: Complex64| -> Result<Complex64> {
            Ok((z - c(1.0, 0.5)) * (z + c(0.5, 0.2)) * (z - c(-2.0, -1.0)))
        };
        let n = count_zeros_in_rect(&f, Rect::new(-3.0, 3.0, -2.0, 2.0)).unwrap();
        assert_eq!(n, 3);
        let n = count_zeros_in_rect(&f, Rect::new(0.0, 3.0, 0.0, 2.0)).unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn rejects_bad_quasimomentum_and_tolerance() {
        assert!(bloch_roots(c(0.0, 0.0), -0.1, Rect::new(0.0, 1.0, -1.0, 1.0), 1e-10).is_err());
        assert!(monodromy(c(0.0, 0.0), c(0.0, 0.0), 1e-3).is_err());
    }
}
