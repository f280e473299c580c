//! The second approximation of the characteristic function as a degree-8
//! polynomial.
//!
//! Truncating the characteristic series at order m = 2 gives the rational
//! function
//!
//! ```text
//! Q(a², λ) = λ² − 4λ − 2a² − a²λ/(λ−16) − a⁴λ/((λ−16)²(λ−36))
//!            − a⁶λ/((λ−16)³(λ−36)²) − a⁶λ/((λ−16)²(λ−36)²(λ−64)),
//! ```
//!
//! and clearing denominators produces the monic degree-8 polynomial
//!
//! ```text
//! P(a², λ) = (λ−16)³(λ−36)²(λ−64)·Q(a², λ).
//! ```
//!
//! Every λ-coefficient of P is a cubic polynomial in u = a² with integer
//! coefficients; they are assembled once in exact i128 arithmetic and only
//! then converted to floating point, so the polynomial handed to the root
//! finder is exactly the mathematical one (all integer coefficients fit well
//! inside the 53-bit mantissa). Roots come from the companion matrix and are
//! polished by Newton iteration on the Horner form.
//!
//! The module also carries the two reference couplings and the four circles
//! of radius 0.00023 around the low root pair, on which the Rouché
//! comparison between Q and the discarded series tail is certified.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::OnceLock;

use crate::error::{Result, SpectralError};

/// Coupling square for which the low pair of P is real and separated.
pub const A_SQ_REAL_PAIR: f64 = -2.15728123;
/// Coupling square for which the low pair of P is a conjugate pair.
pub const A_SQ_CONJ_PAIR: f64 = -2.157281295;
/// Radius of the reference circles around the low root pair.
pub const REFERENCE_CIRCLE_RADIUS: f64 = 0.00023;
/// Centers of the four reference circles: the low root pair of P at
/// [`A_SQ_REAL_PAIR`] and at [`A_SQ_CONJ_PAIR`].
pub const REFERENCE_CIRCLE_CENTERS: [Complex64; 4] = [
    Complex64::new(2.088438808, 0.0),
    Complex64::new(2.088959036, 0.0),
    Complex64::new(2.088698925, 0.000232839),
    Complex64::new(2.088698925, -0.000232839),
];

/// Monic degree-8 polynomial in λ with coefficients evaluated at one a².
#[derive(Debug, Clone)]
pub struct ApproxPolynomial {
    pub a_squared: f64,
    /// Ascending coefficients c₀ … c₈ (c₈ = 1).
    pub coeffs: [f64; 9],
}

impl ApproxPolynomial {
    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::ZERO;
        let mut dp = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Scale Σ|c_j||z|^j used for backward-relative residuals.
    pub fn residual_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut scale = 0.0;
        let mut pow = 1.0;
        for &c in self.coeffs.iter() {
            scale += c.abs() * pow;
            pow *= r;
        }
        scale.max(1.0)
    }
}

// ============================================================================
// Exact coefficient assembly
// ============================================================================

/// coefficient of λ^j · u^p, assembled exactly
fn integer_coefficients() -> &'static [[i128; 4]; 9] {
    static CACHE: OnceLock<[[i128; 4]; 9]> = OnceLock::new();
    CACHE.get_or_init(|| {
        fn mul(p: &[i128], q: &[i128]) -> Vec<i128> {
            let mut r = vec![0i128; p.len() + q.len() - 1];
            for (i, &a) in p.iter().enumerate() {
                for (j, &b) in q.iter().enumerate() {
                    r[i + j] += a * b;
                }
            }
            r
        }
        let l16 = vec![-16i128, 1];
        let l36 = vec![-36i128, 1];
        let l64 = vec![-64i128, 1];
        let l16_2 = mul(&l16, &l16);
        let l16_3 = mul(&l16_2, &l16);
        let l36_2 = mul(&l36, &l36);
        // B = (λ−16)³(λ−36)²(λ−64), C = (λ−16)²(λ−36)²(λ−64), D = (λ−16)(λ−36)(λ−64)
        let b = mul(&mul(&l16_3, &l36_2), &l64);
        let c = mul(&mul(&l16_2, &l36_2), &l64);
        let d = mul(&mul(&l16, &l36), &l64);

        let mut out = [[0i128; 4]; 9];
        // u⁰: (λ² − 4λ)·B
        let quad = mul(&[0, -4, 1], &b);
        for (j, &v) in quad.iter().enumerate() {
            out[j][0] = v;
        }
        // u¹: −2B − λ·C
        for (j, &v) in b.iter().enumerate() {
            out[j][1] -= 2 * v;
        }
        for (j, &v) in c.iter().enumerate() {
            out[j + 1][1] -= v;
        }
        // u²: −λ·D
        for (j, &v) in d.iter().enumerate() {
            out[j + 1][2] -= v;
        }
        // u³: −λ·((λ−64) + (λ−16)) = −2λ² + 80λ
        out[1][3] = 80;
        out[2][3] = -2;
        out
    })
}

/// Assemble P(a², ·) for one coupling square.
pub fn build_p(a_squared: f64) -> ApproxPolynomial {
    let ints = integer_coefficients();
    let u = a_squared;
    let powers = [1.0, u, u * u, u * u * u];
    let mut coeffs = [0.0f64; 9];
    for j in 0..9 {
        let mut acc = 0.0;
        for p in 0..4 {
            acc += ints[j][p] as f64 * powers[p];
        }
        coeffs[j] = acc;
    }
    ApproxPolynomial {
        a_squared,
        coeffs,
    }
}

/// The rational form of the second approximation.
pub fn q_eval(a_squared: f64, lambda: Complex64) -> Complex64 {
    let u = a_squared;
    let d16 = lambda - 16.0;
    let d36 = lambda - 36.0;
    let d64 = lambda - 64.0;
    lambda * lambda - 4.0 * lambda - 2.0 * u
        - u * lambda / d16
        - u * u * lambda / (d16 * d16 * d36)
        - u.powi(3) * lambda / (d16 * d16 * d16 * d36 * d36)
        - u.powi(3) * lambda / (d16 * d16 * d36 * d36 * d64)
}

/// All eight roots of P(a², ·), companion-matrix eigenvalues polished by
/// Newton to a backward-relative residual below 1e-12, sorted by (Re, Im).
///
/// Roots in multiple clusters (they occur only at special couplings such as
/// a² = 0, where 16 is a triple root) keep the companion accuracy; Newton
/// cannot improve a defective root and is skipped once the step stagnates.
pub fn roots_p(a_squared: f64) -> Vec<Complex64> {
    let p = build_p(a_squared);
    let mut m = DMatrix::<f64>::zeros(8, 8);
    for i in 1..8 {
        m[(i, i - 1)] = 1.0;
    }
    for j in 0..8 {
        m[(j, 7)] = -p.coeffs[j];
    }
    let eig = m.complex_eigenvalues();
    let mut roots: Vec<Complex64> = eig.iter().map(|z| Complex64::new(z.re, z.im)).collect();
    for z in roots.iter_mut() {
        let mut best = *z;
        let mut best_res = p.eval(*z).norm();
        for _ in 0..40 {
            let (v, dv) = p.eval_with_derivative(*z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            *z -= step;
            let res = p.eval(*z).norm();
            if res < best_res {
                best_res = res;
                best = *z;
            }
            if step.norm() < 1e-13 * (1.0 + z.norm())
                || res <= 1e-12 * p.residual_scale(*z) * f64::EPSILON / 1e-12
            {
                break;
            }
        }
        *z = best;
    }
    roots.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });
    roots
}

/// Sample `count` points of the circle |λ − center| = radius.
pub fn circle_points(center: Complex64, radius: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
            center + radius * Complex64::new(th.cos(), th.sin())
        })
        .collect()
}

/// The two reference circles attached to one of the reference couplings.
pub fn reference_circles(a_squared: f64) -> Result<[(Complex64, f64); 2]> {
    if a_squared == A_SQ_REAL_PAIR {
        Ok([
            (REFERENCE_CIRCLE_CENTERS[0], REFERENCE_CIRCLE_RADIUS),
            (REFERENCE_CIRCLE_CENTERS[1], REFERENCE_CIRCLE_RADIUS),
        ])
    } else if a_squared == A_SQ_CONJ_PAIR {
        Ok([
            (REFERENCE_CIRCLE_CENTERS[2], REFERENCE_CIRCLE_RADIUS),
            (REFERENCE_CIRCLE_CENTERS[3], REFERENCE_CIRCLE_RADIUS),
        ])
    } else {
        Err(SpectralError::Domain(format!(
            "no reference circles stored for a² = {a_squared}"
        )))
    }
}
