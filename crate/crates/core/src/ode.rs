//! Adaptive Dormand–Prince 5(4) integration of the monodromy problem.
//!
//! Integrates −y″ + 2a·cos(2x)·y = λy over [0, π] for the two fundamental
//! solutions θ (θ(0) = 1, θ′(0) = 0) and φ (φ(0) = 0, φ′(0) = 1) together
//! with their λ-derivatives, which satisfy the variational equation
//! (∂λy)″ = (q − λ)∂λy − y with zero initial data. Carrying the variational
//! pair costs one extra right-hand side but yields exact discriminant
//! derivatives, free of the subtractive cancellation a finite difference
//! would suffer near double roots.
//!
//! The state is eight complex components:
//! [θ, θ′, φ, φ′, ∂λθ, ∂λθ′, ∂λφ, ∂λφ′].

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Result, SpectralError};

pub(crate) const STATE: usize = 8;
pub(crate) type State = [Complex64; STATE];

/// Fundamental-solution data at the half period and at the full period.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ShootingData {
    pub at_half: State,
    pub at_pi: State,
}

#[inline]
fn rhs(x: f64, y: &State, a: Complex64, lambda: Complex64, out: &mut State) {
    // y'' = (q - λ) y, with q(x) = 2a cos 2x
    let w = 2.0 * a * (2.0 * x).cos() - lambda;
    out[0] = y[1];
    out[1] = w * y[0];
    out[2] = y[3];
    out[3] = w * y[2];
    out[4] = y[5];
    out[5] = w * y[4] - y[0];
    out[6] = y[7];
    out[7] = w * y[6] - y[2];
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const BSTAR: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Dopri {
    a: Complex64,
    lambda: Complex64,
    rtol: f64,
    atol: f64,
}

impl Dopri {
    /// Advance `y` from `x0` to `x1`, adapting the step to the local error.
    fn advance(&self, mut x: f64, x1: f64, y: &mut State) -> Result<()> {
        let mut h = (x1 - x).min(0.1);
        let mut k = [[Complex64::ZERO; STATE]; 7];
        rhs(x, y, self.a, self.lambda, &mut k[0]);
        let mut steps = 0usize;
        while x < x1 {
            if x + h > x1 {
                h = x1 - x;
            }
            if h < 1e-13 {
                return Err(SpectralError::Integration {
                    lambda: self.lambda,
                    reason: format!("step size underflow at x = {x}"),
                });
            }
            steps += 1;
            if steps > 2_000_000 {
                return Err(SpectralError::Integration {
                    lambda: self.lambda,
                    reason: "step budget exhausted".into(),
                });
            }
            let stage = |coeffs: &[(f64, usize)], ci: f64, out_idx: usize, k: &mut [[Complex64; STATE]; 7], y: &State| {
                let mut yt = *y;
                for (c, j) in coeffs {
                    for i in 0..STATE {
                        yt[i] += h * c * k[*j][i];
                    }
                }
                let mut o = [Complex64::ZERO; STATE];
                rhs(x + ci * h, &yt, self.a, self.lambda, &mut o);
                k[out_idx] = o;
            };
            stage(&[(A21, 0)], C[0], 1, &mut k, y);
            stage(&[(A31, 0), (A32, 1)], C[1], 2, &mut k, y);
            stage(&[(A41, 0), (A42, 1), (A43, 2)], C[2], 3, &mut k, y);
            stage(&[(A51, 0), (A52, 1), (A53, 2), (A54, 3)], C[3], 4, &mut k, y);
            stage(
                &[(A61, 0), (A62, 1), (A63, 2), (A64, 3), (A65, 4)],
                C[4],
                5,
                &mut k,
                y,
            );
            // 5th-order solution (also the last stage point, FSAL)
            let mut y5 = *y;
            for i in 0..STATE {
                let mut acc = Complex64::ZERO;
                for j in 0..6 {
                    if B[j] != 0.0 {
                        acc += B[j] * k[j][i];
                    }
                }
                y5[i] += h * acc;
            }
            let mut k7 = [Complex64::ZERO; STATE];
            rhs(x + h, &y5, self.a, self.lambda, &mut k7);
            k[6] = k7;
            // embedded error estimate
            let mut err_sq = 0.0;
            for i in 0..STATE {
                let mut e = Complex64::ZERO;
                for j in 0..7 {
                    let d = B[j] - BSTAR[j];
                    if d != 0.0 {
                        e += d * k[j][i];
                    }
                }
                let e = (h * e).norm();
                let scale = self.atol + self.rtol * y[i].norm().max(y5[i].norm());
                err_sq += (e / scale) * (e / scale);
            }
            let err = (err_sq / STATE as f64).sqrt();
            if err <= 1.0 {
                x += h;
                *y = y5;
                k[0] = k[6];
            } else {
                rhs(x, y, self.a, self.lambda, &mut k[0]);
            }
            let factor = if err > 0.0 {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h *= factor;
        }
        Ok(())
    }
}

/// Integrate the fundamental system over [0, π], recording the state at π/2.
///
/// `tol` is used as both relative and absolute tolerance of the embedded
/// error control.
pub(crate) fn shoot(a: Complex64, lambda: Complex64, tol: f64) -> Result<ShootingData> {
    let solver = Dopri {
        a,
        lambda,
        rtol: tol,
        atol: tol,
    };
    let mut y: State = [Complex64::ZERO; STATE];
    y[0] = Complex64::ONE; // θ(0)
    y[3] = Complex64::ONE; // φ'(0)
    solver.advance(0.0, FRAC_PI_2, &mut y)?;
    let at_half = y;
    solver.advance(FRAC_PI_2, PI, &mut y)?;
    Ok(ShootingData { at_half, at_pi: y })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_equation_closed_form() {
        // a = 0, λ = 4: θ = cos 2x, φ = sin(2x)/2.
        let d = shoot(Complex64::ZERO, Complex64::new(4.0, 0.0), 1e-12).unwrap();
        assert!((d.at_pi[0] - 1.0).norm() < 1e-10); // θ(π) = cos 2π
        assert!((d.at_pi[3] - 1.0).norm() < 1e-10); // φ'(π) = cos 2π
        assert!(d.at_pi[2].norm() < 1e-10); // φ(π) = 0
        assert!((d.at_half[0] + 1.0).norm() < 1e-10); // θ(π/2) = cos π = −1
    }

    #[test]
    fn variational_components_match_finite_differences() {
        let a = Complex64::new(0.0, 0.9);
        let lam = Complex64::new(3.7, 0.2);
        let h = 1e-6;
        let d0 = shoot(a, lam, 1e-12).unwrap();
        let dp = shoot(a, lam + h, 1e-12).unwrap();
        let dm = shoot(a, lam - h, 1e-12).unwrap();
        for (i, di) in [(0usize, 4usize), (1, 5), (2, 6), (3, 7)] {
            let fd = (dp.at_pi[i] - dm.at_pi[i]) / (2.0 * h);
            assert!(
                (fd - d0.at_pi[di]).norm() < 1e-5 * (1.0 + fd.norm()),
                "component {i}: fd {fd} vs variational {}",
                d0.at_pi[di]
            );
        }
    }

    #[test]
    fn wronskian_is_preserved() {
        let a = Complex64::new(0.0, 1.5);
        let lam = Complex64::new(17.3, -4.1);
        let d = shoot(a, lam, 1e-12).unwrap();
        let w = d.at_pi[0] * d.at_pi[3] - d.at_pi[1] * d.at_pi[2];
        assert!((w - 1.0).norm() < 1e-10);
    }
}
