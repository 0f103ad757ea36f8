//! One-step propagation objects for the six methods.
//!
//! Polynomial-form methods return a [`StepFactor`] whose entries are
//! polynomials in the phase variable `x`; the Magnus family returns a
//! [`MagnusStep`] holding the `ζ`-independent part of the generator, turned
//! into a numeric matrix per spectral node.

mod magnus;
mod mat2;
mod rk;
mod split;

use num_complex::Complex64;

use crate::grid::SampledPotential;
use crate::poly::{ComplexPoly, MatPoly2};

pub use magnus::{step_cf24, step_m12, step_m34, MagnusStep};
pub use mat2::{exp_traceless_2x2, Mat2};
pub use rk::{step_erk34, step_irk34};
pub use split::step_scf24;

pub(crate) use mat2::expm_traceless;

/// Potential samples at the start, midpoint and end of one step, already
/// scaled by `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSamples {
    pub q: [Complex64; 3],
    pub r: [Complex64; 3],
}

impl StepSamples {
    pub fn new(
        qn: Complex64,
        qmid: Complex64,
        qnp1: Complex64,
        rn: Complex64,
        rmid: Complex64,
        rnp1: Complex64,
    ) -> Self {
        StepSamples { q: [qn, qmid, qnp1], r: [rn, rmid, rnp1] }
    }

    /// Samples `2k, 2k+1, 2k+2` of the potential.
    pub fn of_step(pot: &SampledPotential, k: usize) -> Self {
        let (q, r) = (pot.q(), pot.r());
        StepSamples {
            q: [q[2 * k], q[2 * k + 1], q[2 * k + 2]],
            r: [r[2 * k], r[2 * k + 1], r[2 * k + 2]],
        }
    }

    /// Multiply `Q` by `e^{iθ}` and `R` by `e^{-iθ}`.
    pub fn rotated(&self, theta: f64) -> Self {
        let p = Complex64::from_polar(1.0, theta);
        StepSamples { q: self.q.map(|v| v * p), r: self.r.map(|v| v * p.conj()) }
    }
}

/// Meaning of the polynomial variable `x` of a step factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepVariable {
    /// `x = z² = exp(iζh)` (Runge-Kutta schemes).
    ZSquared,
    /// `x = z = exp(iζh/4)` (split commutator-free scheme).
    Z,
}

impl StepVariable {
    /// Number of powers of `x` that make up `exp(iζh)`.
    pub fn powers_per_step(self) -> i64 {
        match self {
            StepVariable::ZSquared => 1,
            StepVariable::Z => 4,
        }
    }

    pub fn x_of(self, zeta: Complex64, h: f64) -> Complex64 {
        (Complex64::new(0.0, h / self.powers_per_step() as f64) * zeta).exp()
    }
}

/// One step in polynomial form: `v_{n+1} = x^p · M(x) / Δ(x) · v_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFactor {
    /// Transfer-matrix numerator.
    pub m: MatPoly2,
    /// Denominator polynomial (`x Δ(x)/Θ` for IRK34, `1` otherwise).
    pub delta: ComplexPoly,
    /// Normalization constant already divided out of `m` and `delta`.
    pub theta: Complex64,
    pub var: StepVariable,
    /// The power `p` of `x` carried outside the polynomials.
    pub prefactor_power: i64,
}

impl StepFactor {
    /// Numeric step matrix at a given value of `x`.
    pub fn eval(&self, x: Complex64) -> Mat2 {
        let [[a, b], [c, d]] = self.m.eval(x);
        let s = x.powi(self.prefactor_power as i32) / self.delta.eval(x);
        Mat2::new(a * s, b * s, c * s, d * s)
    }

    /// Numeric step matrix at spectral parameter `zeta`.
    pub fn propagator(&self, zeta: Complex64, h: f64) -> Mat2 {
        self.eval(self.var.x_of(zeta, h))
    }
}

/// Build a polynomial from coefficients in ascending powers.
pub(crate) fn poly<const K: usize>(c: [Complex64; K]) -> ComplexPoly {
    ComplexPoly::new(c.to_vec())
}
