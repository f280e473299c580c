//! The potential family and the optical-strength / Mathieu-coupling reduction.
//!
//! The operator under study is the Hill operator −d²/dx² + q(x) on the line
//! with the PT-symmetric optical potential
//!
//! ```text
//! q(x) = 4cos²x + 4iV·sin2x = 2 + (1+2V)e^{2ix} + (1−2V)e^{−2ix},   V ≥ 0.
//! ```
//!
//! Two potentials c·e^{−2ix} + d·e^{2ix} with equal products c·d share their
//! Hill discriminant and therefore their Bloch spectrum, so up to the constant
//! shift the optical potential is isospectral to the complex Mathieu potential
//!
//! ```text
//! q(x) = 2a·cos2x,   a = √(1 − 4V²).
//! ```
//!
//! All solvers in this crate work in the Mathieu normalization and convert
//! from V once at the boundary. The coupling `a` runs over [0, 1] for
//! V ∈ [0, 1/2] and up the positive imaginary axis for V > 1/2.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SpectralError};

/// Which parameter the caller supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CouplingOrigin {
    FromV,
    FromA,
}

/// One member of the potential family, carrying both parameterizations.
#[derive(Debug, Clone, Copy)]
pub struct Potential {
    v: Option<f64>,
    a: Complex64,
    origin: CouplingOrigin,
}

impl Potential {
    /// Build from the optical gain/loss strength V ≥ 0.
    pub fn from_strength(v: f64) -> Result<Self> {
        let a = coupling_from_strength(v)?;
        Ok(Potential {
            v: Some(v),
            a,
            origin: CouplingOrigin::FromV,
        })
    }

    /// Build directly from the Mathieu coupling a.
    pub fn from_coupling(a: Complex64) -> Self {
        Potential {
            v: strength_from_coupling(a),
            a,
            origin: CouplingOrigin::FromA,
        }
    }

    pub fn coupling(&self) -> Complex64 {
        self.a
    }

    /// The optical strength, when the coupling corresponds to one
    /// (a² real and ≤ 1).
    pub fn strength(&self) -> Option<f64> {
        self.v
    }

    pub fn origin(&self) -> CouplingOrigin {
        self.origin
    }
}

/// Map the optical strength V to the Mathieu coupling a = √(1 − 4V²) on the
/// principal branch: real and nonnegative for V ≤ 1/2, and i·√(4V² − 1)
/// (positive imaginary part) for V > 1/2.
pub fn coupling_from_strength(v: f64) -> Result<Complex64> {
    if !v.is_finite() || v < 0.0 {
        return Err(SpectralError::Domain(format!(
            "optical strength must be finite and nonnegative, got {v}"
        )));
    }
    let s = 1.0 - 4.0 * v * v;
    if s >= 0.0 {
        Ok(Complex64::new(s.sqrt(), 0.0))
    } else {
        Ok(Complex64::new(0.0, (-s).sqrt()))
    }
}

/// Inverse map V = ½·√(1 − a²), defined whenever a² is real with a² ≤ 1.
pub fn strength_from_coupling(a: Complex64) -> Option<f64> {
    let a_sq = a * a;
    if a_sq.im.abs() > 1e-14 * (1.0 + a_sq.re.abs()) || a_sq.re > 1.0 {
        return None;
    }
    Some(0.5 * (1.0 - a_sq.re).sqrt())
}
