//! Complex log-Gamma by the Lanczos approximation.
//!
//! Coefficients are Godfrey's set for `g = 607/128` with 15 terms; the
//! reflection formula covers `Re z < 1/2`, with `ln sin(πz)` evaluated in a
//! form that does not overflow for large `|Im z|`.

use std::f64::consts::PI;

use num_complex::Complex64;

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(z)` up to an additive multiple of `2πi`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z)
    } else {
        let z = z - 1.0;
        let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
        for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            series += c / (z + k as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        LN_SQRT_2PI + (z + 0.5) * t.ln() - t + series.ln()
    }
}

/// `Γ(z)`; overflows for large arguments, use [`ln_gamma`] there.
pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// `ln sin(πz)` up to `2πi`, stable for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if z.im.abs() < 8.0 {
        (PI * z).sin().ln()
    } else if z.im > 0.0 {
        -i * PI * z + (1.0 - (2.0 * i * PI * z).exp()).ln() - Complex64::new(0.0, -2.0).ln()
    } else {
        i * PI * z + (1.0 - (-2.0 * i * PI * z).exp()).ln() - Complex64::new(0.0, 2.0).ln()
    }
}
