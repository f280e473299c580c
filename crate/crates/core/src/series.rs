//! The iterated characteristic series for the two lowest PN eigenvalues.
//!
//! Eliminating every Fourier coefficient except a₁ from the PN recurrence
//! turns the eigenvalue problem near the origin into a scalar characteristic
//! equation
//!
//! ```text
//! N(a, λ) = λ² − 4λ − 2a² − a²λ/(λ−16) − Σ_{k≥1} λ·A_k(a, λ) = 0,
//! ```
//!
//! whose two roots inside |λ| < 9 are exactly the PN eigenvalues λ₀(a) and
//! λ₂⁻(a) for purely imaginary a with |a| < 2. The first term is closed form,
//!
//! ```text
//! A₁(a, λ) = a⁴ / ((λ−16)²(λ−36)),
//! ```
//!
//! and for k ≥ 2 each A_k is a sum over sign sequences n₁, …, n_{2k−3} ∈ {±1}
//! of simple-pole products
//!
//! ```text
//! A_k = Σ a^{2k+2} / ((λ−16)²(λ−36)² Π_s (λ − (6 + 2(n₁+…+n_s))²)),
//! ```
//!
//! the sum running over sequences with n₁+…+n_{2k−3} = ±1 whose even prefix
//! sums keep 3 + n₁+…+n_{2s} > 1 for s ≤ k−2. The admissible sequences form a
//! ballot-type family (2, 5, 14, 42, … of Catalan growth), enumerated once
//! per order and cached.
//!
//! On |a| ≤ 2, |λ| ≤ 9 the terms obey the geometric bounds
//!
//! ```text
//! |A_k|  < (1/14)·(16/189)^k,           |A_k′| < ((2k+1)/98)·(16/189)^k,
//! |A_k″| < ((4k²+6k+2)/686)·(16/189)^k,
//! ```
//!
//! so truncating at order m leaves a certified geometric tail. Everything
//! downstream — the polynomial approximation, the degeneration-point search,
//! the sharpened tail bound on the reference circles — builds on these
//! evaluations.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::error::{Result, SpectralError};

/// Largest series order kept: the admissible-path count grows like the
/// Catalan numbers and the tail below order 12 is already ≪ 1e-14.
pub const MAX_SERIES_ORDER: usize = 12;

/// Geometric ratio of the term bounds on |a| ≤ 2, |λ| ≤ 9.
pub const TERM_RATIO: f64 = 16.0 / 189.0;

// ============================================================================
// Admissible sign paths
// ============================================================================

/// One admissible sign sequence (n₁, …, n_{2k−3}) of a series term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPath {
    pub signs: Vec<i8>,
}

impl IndexPath {
    /// Sum of the signs; ±1 for an admissible path.
    pub fn total(&self) -> i32 {
        self.signs.iter().map(|&s| s as i32).sum()
    }
}

/// Enumerate the admissible sign sequences of order k ≥ 2: length 2k−3,
/// total ±1, and every even prefix sum n₁+…+n_{2s} ≥ 0 for s ≤ k−2.
pub fn enumerate_paths(k: usize) -> Result<Vec<IndexPath>> {
    if k < 2 {
        return Err(SpectralError::Domain(
            "series paths start at order 2; order 1 is closed form".into(),
        ));
    }
    if k > MAX_SERIES_ORDER {
        return Err(SpectralError::Domain(format!(
            "series order {k} exceeds the supported maximum {MAX_SERIES_ORDER}"
        )));
    }
    let len = 2 * k - 3;
    let mut out = Vec::new();
    let mut seq: Vec<i8> = Vec::with_capacity(len);
    fn rec(seq: &mut Vec<i8>, psum: i32, len: usize, k: usize, out: &mut Vec<IndexPath>) {
        let s = seq.len();
        if s == len {
            if psum.abs() == 1 {
                out.push(IndexPath { signs: seq.clone() });
            }
            return;
        }
        let remaining = (len - s) as i32;
        if psum.abs() - remaining > 1 {
            return;
        }
        for sign in [1i8, -1i8] {
            let next = psum + sign as i32;
            let pos = s + 1;
            // even prefix sums up to position 2(k−2) must stay nonnegative
            if pos % 2 == 0 && pos <= 2 * (k - 2) && next < 0 {
                continue;
            }
            seq.push(sign);
            rec(seq, next, len, k, out);
            seq.pop();
        }
    }
    rec(&mut seq, 0, len, k, &mut out);
    Ok(out)
}

/// Poles with multiplicities of one series term, the common factor
/// (λ−16)²(λ−36)² already folded in.
#[derive(Debug, Clone)]
struct PathPoles {
    poles: Vec<(f64, u32)>,
}

fn compile_path(path: &IndexPath) -> PathPoles {
    let mut poles: Vec<(f64, u32)> = vec![(16.0, 2), (36.0, 2)];
    let mut psum = 0i32;
    for &s in &path.signs {
        psum += s as i32;
        let p = ((6 + 2 * psum) as f64).powi(2);
        match poles.iter_mut().find(|(q, _)| *q == p) {
            Some((_, m)) => *m += 1,
            None => poles.push((p, 1)),
        }
    }
    PathPoles { poles }
}

fn compiled_paths(k: usize) -> Result<&'static Vec<PathPoles>> {
    const INIT: OnceLock<Vec<PathPoles>> = OnceLock::new();
    static CACHE: [OnceLock<Vec<PathPoles>>; MAX_SERIES_ORDER + 1] =
        [INIT; MAX_SERIES_ORDER + 1];
    if !(2..=MAX_SERIES_ORDER).contains(&k) {
        return Err(SpectralError::Domain(format!(
            "series order {k} outside 2..={MAX_SERIES_ORDER}"
        )));
    }
    if CACHE[k].get().is_none() {
        let compiled: Vec<PathPoles> = enumerate_paths(k)?.iter().map(compile_path).collect();
        let _ = CACHE[k].set(compiled);
    }
    Ok(CACHE[k].get().expect("cache populated above"))
}

// ============================================================================
// Series terms
// ============================================================================

/// A_k(a, λ) with its first two λ-derivatives.
#[derive(Debug, Clone, Copy)]
pub struct SeriesTerm {
    pub k: usize,
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

fn pole_guard(lambda: Complex64) -> Result<()> {
    // poles sit at (2s)² for s ≥ 2
    let s_near = ((lambda.norm().sqrt() / 2.0).round() as i64).max(2);
    for s in (s_near - 1).max(2)..=s_near + 1 {
        let pole = ((2 * s) as f64).powi(2);
        let dist = (lambda - pole).norm();
        if dist <= 1e-6 {
            return Err(SpectralError::PoleProximity {
                lambda,
                pole,
                dist,
            });
        }
    }
    Ok(())
}

#[inline]
fn complex_powu(base: Complex64, exp: u32) -> Complex64 {
    let mut acc = Complex64::ONE;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Evaluate A_k(a, λ) together with A_k′ and A_k″.
///
/// Each summand is a constant over a product of powers of simple poles, so
/// the derivatives come from logarithmic differentiation of every term:
/// with S₁ = Σ m/(λ−p) and S₂ = Σ m/(λ−p)², one has T′ = −T·S₁ and
/// T″ = T·(S₁² + S₂), exactly and without numerical differencing.
pub fn series_term(a: Complex64, lambda: Complex64, k: usize) -> Result<SeriesTerm> {
    pole_guard(lambda)?;
    if k == 0 {
        return Err(SpectralError::Domain("series order must be ≥ 1".into()));
    }
    if k == 1 {
        let d16 = lambda - 16.0;
        let d36 = lambda - 36.0;
        let value = a.powu(4) / (d16 * d16 * d36);
        let s1 = 2.0 / d16 + 1.0 / d36;
        let s2 = 2.0 / (d16 * d16) + 1.0 / (d36 * d36);
        return Ok(SeriesTerm {
            k,
            value,
            d1: -value * s1,
            d2: value * (s1 * s1 + s2),
        });
    }
    let compiled = compiled_paths(k)?;
    let a_pow = a.powu(2 * k as u32 + 2);
    let mut value = Complex64::ZERO;
    let mut d1 = Complex64::ZERO;
    let mut d2 = Complex64::ZERO;
    for path in compiled {
        let mut den = Complex64::ONE;
        let mut s1 = Complex64::ZERO;
        let mut s2 = Complex64::ZERO;
        for &(p, m) in &path.poles {
            let d = lambda - p;
            den *= complex_powu(d, m);
            let inv = 1.0 / d;
            s1 += (m as f64) * inv;
            s2 += (m as f64) * inv * inv;
        }
        let t = a_pow / den;
        value += t;
        d1 -= t * s1;
        d2 += t * (s1 * s1 + s2);
    }
    Ok(SeriesTerm { k, value, d1, d2 })
}

// ============================================================================
// The characteristic function
// ============================================================================

/// N(a, λ) with first and second λ-derivatives, the truncation order used
/// and the certified bound on the discarded tail.
#[derive(Debug, Clone, Copy)]
pub struct CharacteristicEval {
    pub a: Complex64,
    pub lambda: Complex64,
    pub n: Complex64,
    pub n_d1: Complex64,
    pub n_d2: Complex64,
    pub m_used: usize,
    pub tail_bound: f64,
}

/// Certified bound on Σ_{k>m} |λ·A_k| over |a| ≤ 2, |λ| ≤ 9:
/// 9·(1/14)·q^{m+1}/(1−q) with q = 16/189.
pub fn series_tail_bound(m: usize) -> f64 {
    (9.0 / 14.0) * TERM_RATIO.powi(m as i32 + 1) / (1.0 - TERM_RATIO)
}

/// The elimination remainder bound (4/7)·(16/189)^m after m double uses of
/// the recurrence.
pub fn remainder_bound(m: usize) -> Result<f64> {
    if m < 1 {
        return Err(SpectralError::Domain(
            "remainder bound needs at least one elimination round".into(),
        ));
    }
    Ok((4.0 / 7.0) * TERM_RATIO.powi(m as i32))
}

/// Evaluate the characteristic function, truncating at the smallest order
/// whose geometric tail bound does not exceed `target_tail`.
pub fn characteristic_n(
    a: Complex64,
    lambda: Complex64,
    target_tail: f64,
) -> Result<CharacteristicEval> {
    if a.norm() >= 2.0 {
        return Err(SpectralError::Domain(format!(
            "series validity needs |a| < 2, got |a| = {}",
            a.norm()
        )));
    }
    if lambda.norm() > 9.0 + 1e-9 {
        return Err(SpectralError::Domain(format!(
            "series validity needs |λ| ≤ 9, got |λ| = {}",
            lambda.norm()
        )));
    }
    let m_used = (1..=MAX_SERIES_ORDER)
        .find(|&m| series_tail_bound(m) <= target_tail)
        .ok_or(SpectralError::Precision {
            target: target_tail,
            max_order: MAX_SERIES_ORDER,
        })?;
    let a_sq = a * a;
    let d16 = lambda - 16.0;
    let mut n = lambda * lambda - 4.0 * lambda - 2.0 * a_sq - a_sq * lambda / d16;
    let mut n_d1 = 2.0 * lambda - 4.0 - a_sq / d16 + lambda * a_sq / (d16 * d16);
    let mut n_d2 =
        2.0 + 2.0 * a_sq / (d16 * d16) - 2.0 * lambda * a_sq / (d16 * d16 * d16);
    for k in 1..=m_used {
        let t = series_term(a, lambda, k)?;
        n -= lambda * t.value;
        n_d1 -= t.value + lambda * t.d1;
        n_d2 -= 2.0 * t.d1 + lambda * t.d2;
    }
    Ok(CharacteristicEval {
        a,
        lambda,
        n,
        n_d1,
        n_d2,
        m_used,
        tail_bound: series_tail_bound(m_used),
    })
}

/// Default tail target for root finding; order 12 undershoots it.
pub const DEFAULT_TAIL_TARGET: f64 = 1e-14;

// ============================================================================
// Roots inside the disc |λ| < 9
// ============================================================================

/// The two roots of N(a, ·) in |λ| < 9 for purely imaginary a ∈ I(2),
/// returned in the classical order (λ₀, λ₂⁻).
///
/// Seeding goes through the critical point of N: a real Newton iteration on
/// N′ lands on λ_c (N″ ≈ 2 there, so it is well conditioned even when the
/// roots collide), and the pair is predicted from the local quadratic model
/// λ_c ± √(−2N(λ_c)/N″(λ_c)) before each member is polished on N itself.
/// The count is certified by a winding-number pass over |λ| = 9.
pub fn pn_roots_in_d9(a: Complex64, tol: f64) -> Result<(Complex64, Complex64)> {
    let a_sq = a * a;
    if a_sq.im.abs() > 1e-10 * (1.0 + a_sq.norm()) {
        return Err(SpectralError::Domain(format!(
            "expected purely imaginary coupling, got a = {a}"
        )));
    }
    if !(a.norm() > 0.0 && a.norm() < 2.0) {
        return Err(SpectralError::Domain(format!(
            "coupling must satisfy 0 < |a| < 2, got |a| = {}",
            a.norm()
        )));
    }
    let pair = pn_pair(a_sq.re, tol)?;
    certify_two_roots(a)?;
    Ok(pair)
}

/// Root-pair driver on the real coupling square u = a².
pub(crate) fn pn_pair(u: f64, tol: f64) -> Result<(Complex64, Complex64)> {
    pn_pair_with_tail(u, tol, DEFAULT_TAIL_TARGET)
}

pub(crate) fn pn_pair_with_tail(
    u: f64,
    tol: f64,
    tail: f64,
) -> Result<(Complex64, Complex64)> {
    let a = imag_coupling(u);
    // critical point of N on the real axis
    let mut lc = Complex64::new(2.0, 0.0);
    for _ in 0..60 {
        let e = characteristic_n(a, lc, tail)?;
        let step = e.n_d1 / e.n_d2;
        lc -= step;
        if step.norm() < 1e-13 {
            break;
        }
    }
    let e = characteristic_n(a, lc, tail)?;
    let offset = (-2.0 * e.n / e.n_d2).sqrt();
    let lo = newton_on_n(a, lc - offset, tol, tail)?;
    let hi = newton_on_n(a, lc + offset, tol, tail)?;
    order_root_pair(lo, hi)
}

fn imag_coupling(u: f64) -> Complex64 {
    Complex64::new(0.0, (-u).max(0.0).sqrt())
}

fn newton_on_n(a: Complex64, mut z: Complex64, tol: f64, tail: f64) -> Result<Complex64> {
    let tol = tol.max(1e-14);
    let mut best = z;
    let mut best_res = f64::INFINITY;
    let mut stale = 0usize;
    for _ in 0..60 {
        let e = characteristic_n(a, z, tail)?;
        if e.n.norm() < best_res {
            best_res = e.n.norm();
            best = z;
            stale = 0;
        } else {
            // at a (near-)double root the iteration bounces inside its noise
            // floor; keep the best residual seen and stop once it stagnates
            stale += 1;
            if stale >= 4 {
                break;
            }
        }
        if e.n_d1.norm() == 0.0 {
            break;
        }
        let step = e.n / e.n_d1;
        let next = z - step;
        if next.norm() > 9.0 {
            // stay inside the validity disc; pull back to the boundary chord
            z = 0.5 * (z + next * (8.9 / next.norm()));
            continue;
        }
        z = next;
        if step.norm() < tol {
            if characteristic_n(a, z, tail)?.n.norm() < best_res {
                best = z;
            }
            return Ok(best);
        }
    }
    Ok(best)
}

fn order_root_pair(x: Complex64, y: Complex64) -> Result<(Complex64, Complex64)> {
    let real_pair = x.im.abs() <= 1e-9 && y.im.abs() <= 1e-9;
    if real_pair {
        if x.re <= y.re {
            Ok((x, y))
        } else {
            Ok((y, x))
        }
    } else if x.im < y.im {
        Ok((x, y))
    } else {
        Ok((y, x))
    }
}

/// Winding-number certificate: N(a, ·) has exactly two zeros in |λ| < 9.
/// A 1e-12 tail suffices: the count is insensitive to shifts far below the
/// |N| ≥ O(10) scale on the contour.
fn certify_two_roots(a: Complex64) -> Result<()> {
    let f = |z: Complex64| characteristic_n(a, z, 1e-12).map(|e| e.n);
    let contour: Vec<Complex64> = (0..96)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / 96.0;
            Complex64::new(8.999 * th.cos(), 8.999 * th.sin())
        })
        .collect();
    let count = crate::discriminant::winding_number(&f, &contour)?;
    if count != 2 {
        return Err(SpectralError::ModelViolation(format!(
            "characteristic function has {count} roots in |λ| < 9, expected 2"
        )));
    }
    Ok(())
}

// ============================================================================
// Sharpened tail bound on the reference circles
// ============================================================================

/// Components of the sharpened bound on |Σ_{k≥3} λ·A_k| over the reference
/// circles.
#[derive(Debug, Clone, Copy)]
pub struct SharpTailComponents {
    /// Geometric bound on Σ_{k>4} |A_k|.
    pub tail_beyond_4: f64,
    /// Bound on |A₃| from its four explicit summands.
    pub a3_bound: f64,
    /// Bound on |A₃ + A₄| after factoring A₄ through A₃.
    pub a34_bound: f64,
    /// Final bound on |Σ_{k≥3} λ·A_k|.
    pub total: f64,
}

/// Assemble the sharpened tail bound at the worst-case corners of the
/// parameter window 2.156 < −a² < 2.158, |λ| ≤ 2.1:
///
/// - each pole factor −a²/|λ−(2s)²| is bounded by 2.16/|2.1−(2s)²|;
/// - the k > 4 tail is summed geometrically;
/// - A₄ is split into its two A₃-proportional branches plus an explicit
///   four-term remainder E₄.
pub fn sharp_tail_components() -> SharpTailComponents {
    // Σ_{k>4} |A_k|: prefactor 2.16/(8·13.9), ratio 4·2.16/(13.9·33.9)
    let pref: f64 = 2.16 / (8.0 * 13.9);
    let q: f64 = 4.0 * 2.16 / (13.9 * 33.9);
    let tail_beyond_4 = pref * q.powi(5) / (1.0 - q);

    // |A₃| at a² = −2.16, λ = 2.1: the four summands of the closed form
    let a8 = 2.16f64.powi(4);
    let d16: f64 = 16.0 - 2.1;
    let d36: f64 = 36.0 - 2.1;
    let d64: f64 = 64.0 - 2.1;
    let d100: f64 = 100.0 - 2.1;
    let a3_bound = a8 / (d16.powi(4) * d36.powi(3))
        + a8 / (d16.powi(2) * d36.powi(3) * d64.powi(2))
        + 2.0 * a8 / (d16.powi(3) * d36.powi(3) * d64)
        + a8 / (d16.powi(2) * d36.powi(2) * d64.powi(2) * d100);

    // E₄ at a² = −2.16, λ = 2.1: the four summands with n₁ = n₂ = +1
    let a10 = 2.16f64.powi(5);
    let d144: f64 = 144.0 - 2.1;
    let e4 = a10 / (d16.powi(2) * d36.powi(2) * d64.powi(2) * d100.powi(2) * d144)
        + a10 / (d16.powi(2) * d36.powi(2) * d64.powi(3) * d100.powi(2))
        + a10 / (d16.powi(2) * d36.powi(3) * d64.powi(3) * d100)
        + a10 / (d16.powi(3) * d36.powi(3) * d64.powi(2) * d100);

    // |A₃ + A₄| ≤ E₄ + (1 + F(−2.15, 2))·|A₃| with the prefactor evaluated
    // at a² = −2.15, λ = 2
    let one_plus_f = 1.0 - 2.0 * 2.15 / ((16.0 - 2.0) * (36.0 - 2.0));
    let a34_bound = e4 + one_plus_f * a3_bound;

    // |λ| ≤ 2.1 on the circles
    let total = 2.1 * (tail_beyond_4 + a34_bound);
    SharpTailComponents {
        tail_beyond_4,
        a3_bound,
        a34_bound,
        total,
    }
}

/// Certified bound on |Σ_{k≥3} λ·A_k(a², λ)| for λ on one of the four
/// reference circles and 2.156 < −a² < 2.158.
pub fn tail_bound_sharp(a_squared: f64, lambda: Complex64) -> Result<f64> {
    if !(-2.158 < a_squared && a_squared < -2.156) {
        return Err(SpectralError::Domain(format!(
            "sharpened bound requires 2.156 < −a² < 2.158, got a² = {a_squared}"
        )));
    }
    let on_circle = crate::polyapprox::REFERENCE_CIRCLE_CENTERS
        .iter()
        .any(|&c| ((lambda - c).norm() - crate::polyapprox::REFERENCE_CIRCLE_RADIUS).abs() < 1e-7);
    if !on_circle {
        return Err(SpectralError::Domain(format!(
            "λ = {lambda} does not lie on a reference circle"
        )));
    }
    Ok(sharp_tail_components().total)
}
