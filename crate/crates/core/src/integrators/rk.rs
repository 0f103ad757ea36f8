//! Integrating-factor Runge-Kutta schemes in transfer-matrix form.

use num_complex::Complex64;

use super::{poly, StepFactor, StepSamples, StepVariable};
use crate::error::{NftError, Result};
use crate::poly::{matpoly_mul, ComplexPoly, MatPoly2};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Classical RK4 (`ERK34`): `v_{n+1} = x⁻¹ M(x) v_n`, `x = exp(iζh)`.
///
/// Sample `c_k h` inside the step carries the phase `x^{2c_k}` in the
/// off-diagonal entries, which fixes the placement of powers of `x` below.
pub fn step_erk34(s: &StepSamples) -> StepFactor {
    let [qn, qm, qp] = s.q;
    let [rn, rm, rp] = s.r;
    let g = ONE + qm * rm / 6.0;
    let hh = ONE + qm * rm / 2.0;

    let m11 = poly([g, (qm * rn + qp * rm) / 6.0, qm * qp * rn * rm / 24.0]);
    let m22 = poly([qn * qm * rm * rp / 24.0, (qn * rm + qm * rp) / 6.0, g]);
    let m12 = poly([qn * hh / 6.0, qm * (2.0 / 3.0), qp * hh / 6.0]);
    let m21 = poly([rp * hh / 6.0, rm * (2.0 / 3.0), rn * hh / 6.0]);

    StepFactor {
        m: MatPoly2::new(m11, m12, m21, m22),
        delta: ComplexPoly::one(),
        theta: ONE,
        var: StepVariable::ZSquared,
        prefactor_power: -1,
    }
}

/// Three-stage Lobatto IIIA (`IRK34`): `v_{n+1} = M(x) / (x Δ(x)) v_n`.
///
/// `Δ` is a Laurent polynomial with powers `-1..=1`; `x Δ` is stored. Both
/// `M` and `x Δ` are divided by `Θ`, the `x⁰` coefficient of `Δ`.
pub fn step_irk34(s: &StepSamples) -> Result<StepFactor> {
    let [qn, qm, qp] = s.q;
    let [rn, rm, rp] = s.r;
    let theta = ONE + qp * rm * qm * rp / 144.0 - (qp * rp + 4.0 * qm * rm) / 36.0;
    if theta.norm() < 1e-12 {
        return Err(NftError::StepSingularity { step: 0, theta: theta.norm() });
    }

    let late = MatPoly2::new(
        poly([ONE, qp * rm / 12.0]),
        poly([qm / 3.0, qp / 6.0]),
        poly([rp / 6.0, rm / 3.0]),
        poly([rp * qm / 12.0, ONE]),
    );
    let early = MatPoly2::new(
        poly([ONE, rn * qm / 12.0]),
        poly([qn / 6.0, qm / 3.0]),
        poly([rm / 3.0, rn / 6.0]),
        poly([qn * rm / 12.0, ONE]),
    );
    let m = matpoly_mul(&late, &early);
    let x_delta = poly([rp * qm / 36.0, theta, qp * rm / 36.0]);

    let inv = ONE / theta;
    Ok(StepFactor {
        m: m.scale(inv),
        delta: x_delta.scale(inv),
        theta,
        var: StepVariable::ZSquared,
        prefactor_power: 0,
    })
}
