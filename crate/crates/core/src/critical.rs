//! Degeneration points and critical optical strengths.
//!
//! As V grows past 1/2 the coupling a = √(1−4V²) climbs the imaginary axis
//! and pairs of periodic eigenvalues collide pairwise and leave the real
//! axis; at the k-th critical strength V_k the real parts of bands 2k−3 and
//! 2k−2 disappear. V₁ = 1/2 is the free threshold. V₂ is the unique
//! degeneration point of the first periodic eigenvalue: the coupling ir at
//! which λ₀(ir) = λ₂⁻(ir), mapped back through V = ½·√(1+r²).
//!
//! The search variable is c = a/i (equivalently a²), where the squared gap
//! (λ₀ − λ₂⁻)² is smooth and real — positive while the pair is real,
//! negative once it is conjugate — so a sign bisection brackets the
//! degeneration without ever resolving the collision itself. For k = 2 the
//! gap comes from the characteristic series; for k ≥ 3 from the truncated
//! PN/PD matrices, tracking the colliding pair (λ_{2k−4}⁺, λ_{2k−2}⁻).

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::discriminant::{hill_discriminant, DEFAULT_TOL};
use crate::error::{Result, SpectralError};
use crate::operator::{build_truncated_matrix, EigenIndex, SymmetryClass};
use crate::series;

/// Default half-width target for the V₂ bracket. The degeneration point sits
/// about 1.6e-9 above the lower certified edge, so the bracket must resolve
/// well below that margin.
pub const DEFAULT_V_TOL: f64 = 2.5e-10;

/// Default upper end of the strength search interval for `find_vk`; V₃ lies
/// near 3.5004, so anything below that would miss the third critical point.
pub const DEFAULT_V_MAX: f64 = 4.0;

/// Upper end of the supported second-critical-point window: √5/2.
pub fn strength_window_hi() -> f64 {
    5f64.sqrt() / 2.0
}

/// Phase of the first band pair relative to the second critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Phase {
    Case1,
    Case2,
    Case3,
}

/// Squared gap (λ₀ − λ₂⁻)², real by the conjugate-or-real dichotomy.
#[derive(Debug, Clone, Copy)]
pub struct GapIndicator {
    pub a: Complex64,
    pub delta_sq: f64,
}

/// A degeneration point with its certified strength bracket.
#[derive(Debug, Clone, Copy)]
pub struct CriticalPoint {
    pub k: usize,
    /// Degeneration coupling a = ir.
    pub r: f64,
    /// Critical strength V_k = ½·√(1+r²).
    pub v: f64,
    /// Certified bracket in V.
    pub bracket: (f64, f64),
    /// The labels of the colliding eigenvalue pair.
    pub collided_pair: (EigenIndex, EigenIndex),
}

fn v_of_c(c: f64) -> f64 {
    0.5 * (1.0 + c * c).sqrt()
}

fn c_of_v(v: f64) -> f64 {
    (4.0 * v * v - 1.0).max(0.0).sqrt()
}

fn real_part_checked(d_sq: Complex64, context: &str) -> Result<f64> {
    if d_sq.im.abs() >= 1e-8 * d_sq.norm().max(1.0) {
        return Err(SpectralError::ModelViolation(format!(
            "{context}: squared gap {d_sq} is neither real nor purely imaginary in the pair difference"
        )));
    }
    Ok(d_sq.re)
}

/// Squared gap of the first PN pair from the characteristic series.
pub fn gap_indicator(a: Complex64) -> Result<GapIndicator> {
    let (l0, l2m) = series::pn_roots_in_d9(a, 1e-12)?;
    let d = l0 - l2m;
    let delta_sq = real_part_checked(d * d, "series gap indicator")?;
    Ok(GapIndicator { a, delta_sq })
}

fn series_gap_sq(c: f64) -> Result<f64> {
    // tail 1e-13 shifts the degeneration point by ~1e-14 in a², orders of
    // magnitude below the bracket widths of interest
    let (l0, l2m) = series::pn_pair_with_tail(-(c * c), 1e-13, 1e-13)?;
    let d = l0 - l2m;
    real_part_checked(d * d, "series gap indicator")
}

/// Locate the second critical strength by sign bisection of the series gap
/// indicator over c = a/i ∈ (0, 2); the bracket is tightened until its width
/// in V drops below `tol_v`.
pub fn find_v2(tol_v: f64) -> Result<CriticalPoint> {
    if tol_v < 1e-12 {
        return Err(SpectralError::Domain(format!(
            "bracket tolerance {tol_v} is below the double-precision floor 1e-12"
        )));
    }
    let mut c_lo = 0.05;
    let mut c_hi = 1.995;
    let f_lo = series_gap_sq(c_lo)?;
    let f_hi = series_gap_sq(c_hi)?;
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(SpectralError::ModelViolation(format!(
            "gap indicator does not change sign over I(2): {f_lo:.3e} .. {f_hi:.3e}"
        )));
    }
    for _ in 0..200 {
        if v_of_c(c_hi) - v_of_c(c_lo) <= tol_v {
            break;
        }
        let mid = 0.5 * (c_lo + c_hi);
        if series_gap_sq(mid)? > 0.0 {
            c_lo = mid;
        } else {
            c_hi = mid;
        }
    }
    let r = 0.5 * (c_lo + c_hi);
    // certify the root count of the characteristic function once, at the
    // degeneration point itself
    series::pn_roots_in_d9(Complex64::new(0.0, r), 1e-12)?;
    Ok(CriticalPoint {
        k: 2,
        r,
        v: v_of_c(r),
        bracket: (v_of_c(c_lo), v_of_c(c_hi)),
        collided_pair: (EigenIndex::zero(), EigenIndex::minus(2)),
    })
}

// ============================================================================
// Matrix-path indicators for general k
// ============================================================================

/// Class and 0-based positions (within the class, sorted by real part) of the
/// pair colliding at the k-th critical point: (λ_{2k−4}⁺, λ_{2k−2}⁻).
fn colliding_pair_location(k: usize) -> (SymmetryClass, usize, usize) {
    if k % 2 == 0 {
        (SymmetryClass::PN, k - 2, k - 1)
    } else {
        (SymmetryClass::PD, k - 3, k - 2)
    }
}

fn matrix_gap_sq(k: usize, c: f64, order: usize) -> Result<f64> {
    let (class, i, j) = colliding_pair_location(k);
    let a = Complex64::new(0.0, c);
    let m = build_truncated_matrix(class, a, order)?;
    let evs = m.eigenvalues()?;
    if j >= evs.len() {
        return Err(SpectralError::Config(format!(
            "truncation order {order} yields too few {class} eigenvalues"
        )));
    }
    let d = evs[i] - evs[j];
    real_part_checked(d * d, "matrix gap indicator")
}

/// Squared gap of the k-th colliding pair from the truncated matrices.
pub fn gap_indicator_matrix(k: usize, a: Complex64, order: usize) -> Result<GapIndicator> {
    if a.re.abs() > 1e-12 * a.norm().max(1.0) || a.im <= 0.0 {
        return Err(SpectralError::Domain(format!(
            "matrix gap indicator expects purely imaginary coupling, got {a}"
        )));
    }
    let delta_sq = matrix_gap_sq(k, a.im, order)?;
    Ok(GapIndicator { a, delta_sq })
}

/// Locate the k-th critical strength.
///
/// k = 1 returns the free threshold 1/2 exactly. k = 2 delegates to the
/// series route of [`find_v2`]. For k ≥ 3 the colliding pair is tracked in
/// the truncated matrices and bisected over V ∈ (1/2, v_max]; if the gap
/// never changes sign there, the critical point lies beyond `v_max` and a
/// not-found error reports the scanned interval.
pub fn find_vk(k: usize, tol_v: f64, v_max: f64) -> Result<CriticalPoint> {
    if k == 0 || k > 6 {
        return Err(SpectralError::Domain(format!(
            "critical index must lie in 1..=6, got {k}"
        )));
    }
    if k == 1 {
        return Ok(CriticalPoint {
            k: 1,
            r: 0.0,
            v: 0.5,
            bracket: (0.5, 0.5),
            collided_pair: (EigenIndex::minus(1), EigenIndex::plus(1)),
        });
    }
    if k == 2 {
        return find_v2(tol_v);
    }
    if tol_v < 1e-12 {
        return Err(SpectralError::Domain(format!(
            "bracket tolerance {tol_v} is below the double-precision floor 1e-12"
        )));
    }
    if !(v_max > 0.5) {
        return Err(SpectralError::Domain(format!(
            "search ceiling must exceed 1/2, got {v_max}"
        )));
    }
    let mut c_lo = 0.05;
    let mut c_hi = c_of_v(v_max);
    let order = 32 + 2 * (c_hi.ceil() as usize);
    let f_lo = matrix_gap_sq(k, c_lo, order)?;
    if f_lo <= 0.0 {
        return Err(SpectralError::ModelViolation(format!(
            "pair {k} already degenerate at the lower search end (gap² = {f_lo:.3e})"
        )));
    }
    if matrix_gap_sq(k, c_hi, order)? > 0.0 {
        return Err(SpectralError::NotFound {
            lo: 0.5,
            hi: v_max,
        });
    }
    for _ in 0..200 {
        if v_of_c(c_hi) - v_of_c(c_lo) <= tol_v {
            break;
        }
        let mid = 0.5 * (c_lo + c_hi);
        if matrix_gap_sq(k, mid, order)? > 0.0 {
            c_lo = mid;
        } else {
            c_hi = mid;
        }
    }
    let r = 0.5 * (c_lo + c_hi);
    let n = 2 * k as u32 - 2;
    let low_label = if k == 2 {
        EigenIndex::zero()
    } else {
        EigenIndex::plus(n - 2)
    };
    Ok(CriticalPoint {
        k,
        r,
        v: v_of_c(r),
        bracket: (v_of_c(c_lo), v_of_c(c_hi)),
        collided_pair: (low_label, EigenIndex::minus(n)),
    })
}

// ============================================================================
// Verification and phase classification
// ============================================================================

/// Post-hoc verification data for a critical point.
#[derive(Debug, Clone, Copy)]
pub struct CriticalVerification {
    /// The colliding pair evaluated at a = ir.
    pub pair: (Complex64, Complex64),
    /// |difference| of the pair at the degeneration coupling.
    pub gap_abs: f64,
    /// Hill discriminant at the collision point.
    pub f_at_collision: Complex64,
    /// Its λ-derivative; a double Bloch eigenvalue forces it to vanish.
    pub f_prime_at_collision: Complex64,
}

/// Re-evaluate the colliding pair at the found coupling and confirm the
/// double-root signature |F′| ≈ 0 of the discriminant there.
pub fn verify_critical(cp: &CriticalPoint) -> Result<CriticalVerification> {
    let a = Complex64::new(0.0, cp.r);
    let pair = if cp.k == 2 {
        let (l0, l2m) = series::pn_pair(-(cp.r * cp.r), 1e-13)?;
        (l0, l2m)
    } else {
        let (class, i, j) = colliding_pair_location(cp.k);
        let order = 32 + 2 * (cp.r.ceil() as usize);
        let evs = build_truncated_matrix(class, a, order)?.eigenvalues()?;
        (evs[i], evs[j])
    };
    let collision = 0.5 * (pair.0 + pair.1);
    let d = hill_discriminant(a, collision, DEFAULT_TOL)?;
    Ok(CriticalVerification {
        pair,
        gap_abs: (pair.0 - pair.1).norm(),
        f_at_collision: d.f,
        f_prime_at_collision: d.f_prime,
    })
}

fn cached_v2() -> Result<&'static CriticalPoint> {
    static V2: OnceLock<std::result::Result<CriticalPoint, String>> = OnceLock::new();
    let stored = V2.get_or_init(|| find_v2(DEFAULT_V_TOL).map_err(|e| e.to_string()));
    match stored {
        Ok(cp) => Ok(cp),
        Err(msg) => Err(SpectralError::ModelViolation(format!(
            "cached second critical point unavailable: {msg}"
        ))),
    }
}

/// Classify a strength V ∈ (1/2, √5/2) against the certified V₂ bracket.
///
/// Case2 is an interval by construction: any V inside the bracket is
/// indistinguishable from the degeneration point at the certified width.
pub fn classify_phase(v: f64) -> Result<Phase> {
    if !(v > 0.5 && v < strength_window_hi()) {
        return Err(SpectralError::Domain(format!(
            "phase classification applies for 1/2 < V < √5/2, got {v}"
        )));
    }
    let cp = cached_v2()?;
    if v < cp.bracket.0 {
        Ok(Phase::Case1)
    } else if v > cp.bracket.1 {
        Ok(Phase::Case3)
    } else {
        Ok(Phase::Case2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_indicator_signs_across_the_degeneration() {
        // well below: real pair near 0 and 4
        let g = gap_indicator(Complex64::new(0.0, 0.1)).unwrap();
        assert!(g.delta_sq > 15.0 && g.delta_sq < 17.0);
        // real side of the reference window
        let g = gap_indicator(Complex64::new(0.0, 2.15728123f64.sqrt())).unwrap();
        assert!(g.delta_sq > 0.0);
        // conjugate side
        let g = gap_indicator(Complex64::new(0.0, 2.157281295f64.sqrt())).unwrap();
        assert!(g.delta_sq < 0.0);
    }

    #[test]
    fn second_critical_point_bracket() {
        let cp = find_v2(1e-9).unwrap();
        assert!(cp.bracket.0 < cp.v && cp.v < cp.bracket.1);
        assert!(cp.bracket.1 - cp.bracket.0 <= 1e-9);
        assert!(0.8884370025 < cp.v && cp.v < 0.8884370117);
        let a_sq = -cp.r * cp.r;
        assert!(-2.157281295 < a_sq && a_sq < -2.15728123);
        assert_eq!(cp.collided_pair.0, EigenIndex::zero());
        assert_eq!(cp.collided_pair.1, EigenIndex::minus(2));
    }

    #[test]
    fn tolerance_floor_is_enforced() {
        assert!(find_v2(1e-13).is_err());
    }

    #[test]
    fn first_critical_point_is_exact() {
        let cp = find_vk(1, 1e-10, DEFAULT_V_MAX).unwrap();
        assert_eq!(cp.v, 0.5);
        assert_eq!(cp.bracket, (0.5, 0.5));
    }

    #[test]
    fn matrix_and_series_routes_agree_on_v2() {
        let series_cp = find_v2(1e-10).unwrap();
        // same bisection driven by the matrix indicator
        let mut c_lo = 0.05;
        let mut c_hi = 1.995;
        for _ in 0..64 {
            let mid = 0.5 * (c_lo + c_hi);
            if matrix_gap_sq(2, mid, 32).unwrap() > 0.0 {
                c_lo = mid;
            } else {
                c_hi = mid;
            }
        }
        let v_matrix = v_of_c(0.5 * (c_lo + c_hi));
        assert!(
            (v_matrix - series_cp.v).abs() < 1e-8,
            "matrix {v_matrix} vs series {}",
            series_cp.v
        );
    }

    #[test]
    fn third_critical_point_found_within_default_ceiling() {
        let cp = find_vk(3, 1e-8, DEFAULT_V_MAX).unwrap();
        assert!((cp.v - 3.5004).abs() < 1e-3, "V₃ = {}", cp.v);
        assert_eq!(cp.collided_pair.0, EigenIndex::plus(2));
        assert_eq!(cp.collided_pair.1, EigenIndex::minus(4));
        let ver = verify_critical(&cp).unwrap();
        assert!(ver.gap_abs < 1e-3);
        assert!(ver.f_prime_at_collision.norm() < 1e-6);
    }

    #[test]
    fn fourth_critical_point_requires_a_higher_ceiling() {
        match find_vk(4, 1e-6, DEFAULT_V_MAX) {
            Err(SpectralError::NotFound { lo, hi }) => {
                assert_eq!(lo, 0.5);
                assert_eq!(hi, DEFAULT_V_MAX);
            }
            other => panic!("expected not-found, got {other:?}"),
        }
    }

    #[test]
    fn phase_classification() {
        assert_eq!(classify_phase(0.7).unwrap(), Phase::Case1);
        assert_eq!(classify_phase(0.85).unwrap(), Phase::Case1);
        assert_eq!(classify_phase(0.8884370117 + 1e-6).unwrap(), Phase::Case3);
        assert_eq!(classify_phase(1.0).unwrap(), Phase::Case3);
        assert!(classify_phase(0.4).is_err());
        assert!(classify_phase(1.2).is_err());
    }
}
