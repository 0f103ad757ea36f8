//! Magnus and commutator-free Magnus steps.
//!
//! The generators use the three samples at the start, midpoint and end of
//! the step (Simpson weights for the first two moments of the potential).

use num_complex::Complex64;

use super::{expm_traceless, Mat2, StepSamples};

/// `ζ`-independent part of a Magnus-family step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MagnusStep {
    /// `M12`: midpoint sample only.
    OnePoint { q: Complex64, r: Complex64 },
    /// `M34`: `Λ = 𝒯⁽⁰⁾ + [𝒯⁽¹⁾, 𝒯⁽⁰⁾]`.
    FourthOrder {
        g: Complex64,
        h: Complex64,
        xi: Complex64,
        dq: Complex64,
        dr: Complex64,
    },
    /// `CF24`: `exp(Λ⁺) exp(Λ⁻)`.
    CommutatorFree {
        g_plus: Complex64,
        h_plus: Complex64,
        g_minus: Complex64,
        h_minus: Complex64,
    },
}

/// Generator(s) of a Magnus-family step at one spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generators {
    Single(Mat2),
    /// Applied as `exp(plus) · exp(minus)`.
    Pair { plus: Mat2, minus: Mat2 },
}

fn traceless(d: Complex64, b: Complex64, c: Complex64) -> Mat2 {
    Mat2::new(d, b, c, -d)
}

impl MagnusStep {
    pub fn m12(s: &StepSamples) -> Self {
        MagnusStep::OnePoint { q: s.q[1], r: s.r[1] }
    }

    pub fn m34(s: &StepSamples) -> Self {
        let [qn, qm, qp] = s.q;
        let [rn, rm, rp] = s.r;
        let g = (qn + 4.0 * qm + qp) / 6.0;
        let h = (rn + 4.0 * rm + rp) / 6.0;
        let (dq, dr) = (qp - qn, rp - rn);
        let xi = (dq * h - dr * g) / 12.0;
        MagnusStep::FourthOrder { g, h, xi, dq, dr }
    }

    pub fn cf24(s: &StepSamples) -> Self {
        let [qn, qm, qp] = s.q;
        let [rn, rm, rp] = s.r;
        MagnusStep::CommutatorFree {
            g_plus: (3.0 * qp + 4.0 * qm - qn) / 12.0,
            h_plus: (3.0 * rp + 4.0 * rm - rn) / 12.0,
            g_minus: (3.0 * qn + 4.0 * qm - qp) / 12.0,
            h_minus: (3.0 * rn + 4.0 * rm - rp) / 12.0,
        }
    }

    pub fn generators(&self, zeta: Complex64, h: f64) -> Generators {
        let izh = Complex64::new(0.0, h) * zeta;
        match *self {
            MagnusStep::OnePoint { q, r } => Generators::Single(traceless(-izh, q, r)),
            MagnusStep::FourthOrder { g, h: hh, xi, dq, dr } => {
                Generators::Single(traceless(xi - izh, g + izh * dq / 6.0, hh - izh * dr / 6.0))
            }
            MagnusStep::CommutatorFree { g_plus, h_plus, g_minus, h_minus } => {
                let half = -0.5 * izh;
                Generators::Pair {
                    plus: traceless(half, g_plus, h_plus),
                    minus: traceless(half, g_minus, h_minus),
                }
            }
        }
    }

    pub fn propagator(&self, zeta: Complex64, h: f64) -> Mat2 {
        match self.generators(zeta, h) {
            Generators::Single(l) => expm_traceless(&l),
            Generators::Pair { plus, minus } => expm_traceless(&plus) * expm_traceless(&minus),
        }
    }
}

/// One-point Magnus step `exp(-iζhσ₃ + hU(t_mid))`.
pub fn step_m12(qmid: Complex64, rmid: Complex64, zeta: Complex64, h: f64) -> Mat2 {
    MagnusStep::OnePoint { q: qmid, r: rmid }.propagator(zeta, h)
}

/// Fourth-order Magnus step.
pub fn step_m34(s: &StepSamples, zeta: Complex64, h: f64) -> Mat2 {
    MagnusStep::m34(s).propagator(zeta, h)
}

/// Fourth-order commutator-free step `exp(Λ⁺) exp(Λ⁻)`.
pub fn step_cf24(s: &StepSamples, zeta: Complex64, h: f64) -> Mat2 {
    MagnusStep::cf24(s).propagator(zeta, h)
}
