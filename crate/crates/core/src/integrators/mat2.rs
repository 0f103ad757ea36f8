use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{NftError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Numeric 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Mat2([[a, ZERO], [ZERO, d]])
    }

    /// Free propagator `exp(-iζh σ₃)`.
    pub fn free(zeta: Complex64, h: f64) -> Self {
        let p = (Complex64::new(0.0, -h) * zeta).exp();
        Mat2::diag(p, (Complex64::new(0.0, h) * zeta).exp())
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

impl Add for Mat2 {
    type Output = Mat2;

    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;

    fn sub(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([[a[0][0] - b[0][0], a[0][1] - b[0][1]], [a[1][0] - b[1][0], a[1][1] - b[1][1]]])
    }
}

/// Below this `|w|` the hyperbolic functions are replaced by their series.
const SERIES_SWITCH: f64 = 1e-3;

/// `exp(L)` for traceless `L` without the trace check.
///
/// With `w² = L₁₁² + L₁₂L₂₁` one has `L² = w² I`, hence
/// `exp(L) = cosh(w) I + sinh(w)/w · L`. Both coefficients are even in `w`,
/// so the branch of the square root is irrelevant.
pub(crate) fn expm_traceless(l: &Mat2) -> Mat2 {
    let m = &l.0;
    let w2 = m[0][0] * m[0][0] + m[0][1] * m[1][0];
    let (ch, shc) = if w2.norm() < SERIES_SWITCH * SERIES_SWITCH {
        (1.0 + w2 * (0.5 + w2 / 24.0), 1.0 + w2 * (1.0 / 6.0 + w2 / 120.0))
    } else {
        let w = w2.sqrt();
        (w.cosh(), w.sinh() / w)
    };
    Mat2([
        [ch + shc * m[0][0], shc * m[0][1]],
        [shc * m[1][0], ch + shc * m[1][1]],
    ])
}

/// Closed-form exponential of a traceless 2×2 matrix.
///
/// Fails when `|L₁₁ + L₂₂| > 1e-12 ‖L‖`.
pub fn exp_traceless_2x2(l: &Mat2) -> Result<Mat2> {
    let trace = l.trace().norm();
    let norm = l.max_abs();
    if trace > 1e-12 * norm {
        return Err(NftError::NotTraceless { trace, norm });
    }
    Ok(expm_traceless(l))
}
