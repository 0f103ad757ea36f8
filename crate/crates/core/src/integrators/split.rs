//! Split commutator-free scheme (`SCF24`).
//!
//! Each exponential of the commutator-free step is replaced by the
//! combination `[4 (E₈ X½ E₈)² − E₄ X₁ E₄] / 3`, where `E_c` are free phases
//! `exp(-iζhσ₃/c)` and `X` are unimodular first-order approximations
//! `(I + hU)/√det(I + hU)` of the potential exponentials. The result is a
//! polynomial of degree 4 in `z = exp(iζh/4)` per factor.

use num_complex::Complex64;

use super::{poly, StepFactor, StepSamples, StepVariable};
use crate::error::{NftError, Result};
use crate::poly::{matpoly_mul, ComplexPoly, MatPoly2};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

struct Half {
    m: MatPoly2,
    delta: Complex64,
}

fn half_factor(g: Complex64, h: Complex64) -> Result<Half> {
    let gh = g * h;
    let theta = ONE - gh;
    if theta.norm() <= 1e-12 {
        return Err(NftError::SplittingSingularity { step: 0, theta: theta.norm() });
    }
    let delta = (12.0 - 3.0 * gh) / 16.0;
    let c = delta / (3.0 * theta.sqrt());
    let m = MatPoly2::new(
        poly([ONE - c, ZERO, gh / 4.0, ZERO, ZERO]),
        poly([ZERO, g / 2.0, -c * g, g / 2.0, ZERO]),
        poly([ZERO, h / 2.0, -c * h, h / 2.0, ZERO]),
        poly([ZERO, ZERO, gh / 4.0, ZERO, ONE - c]),
    );
    Ok(Half { m, delta })
}

/// `v_{n+1} = z⁻⁴ M⁺(z) M⁻(z) / (Δ⁺Δ⁻) v_n`.
///
/// The scalar `Δ⁺Δ⁻` is divided into `M`, so the returned denominator is 1.
pub fn step_scf24(s: &StepSamples) -> Result<StepFactor> {
    let [qn, qm, qp] = s.q;
    let [rn, rm, rp] = s.r;
    let plus = half_factor((3.0 * qp + 4.0 * qm - qn) / 12.0, (3.0 * rp + 4.0 * rm - rn) / 12.0)?;
    let minus = half_factor((3.0 * qn + 4.0 * qm - qp) / 12.0, (3.0 * rn + 4.0 * rm - rp) / 12.0)?;
    let m = matpoly_mul(&plus.m, &minus.m).scale(ONE / (plus.delta * minus.delta));
    Ok(StepFactor {
        m,
        delta: ComplexPoly::one(),
        theta: ONE,
        var: StepVariable::Z,
        prefactor_power: -4,
    })
}
