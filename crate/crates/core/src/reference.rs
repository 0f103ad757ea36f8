//! Ground truth for the secant-hyperbolic signal, a brute-force refined-grid
//! propagator, and the relative `L²` error measure.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{NftError, Result};
use crate::gamma::ln_gamma;
use crate::grid::{build_grid, Grid, Kappa, SampledPotential, SpectralGrid};
use crate::integrators::{step_cf24, StepSamples};
use crate::par;
use crate::scattering::ContinuousSpectrum;

/// `q(t) = A sech t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SechSpec {
    pub amplitude: f64,
    pub kappa: Kappa,
}

impl SechSpec {
    /// Focusing sech of amplitude `A`.
    pub fn new(amplitude: f64) -> Self {
        SechSpec { amplitude, kappa: Kappa::Focusing }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        Complex64::new(self.amplitude / t.cosh(), 0.0)
    }
}

pub fn sech_signal(spec: &SechSpec, grid: &Grid) -> SampledPotential {
    SampledPotential::from_fn(grid, spec.kappa, |t| spec.eval(t))
        .expect("sech samples are finite and match the grid")
}

/// Closed-form coefficients for the focusing sech signal:
/// `a(ξ) = Γ(½−iξ)² / (Γ(½−iξ+A) Γ(½−iξ−A))`, `b(ξ) = −sin(πA)/cosh(πξ)`.
pub fn sech_analytic_ab(spec: &SechSpec, xi: &[f64]) -> Result<ContinuousSpectrum> {
    if spec.kappa != Kappa::Focusing {
        return Err(NftError::Unsupported("analytic sech coefficients need kappa = -1".into()));
    }
    let amp = spec.amplitude;
    let s = (PI * amp).sin();
    let ab = par::map(xi, |&x| {
        let z = Complex64::new(0.5, -x);
        let ln_a = 2.0 * ln_gamma(z) - ln_gamma(z + amp) - ln_gamma(z - amp);
        (ln_a.exp(), Complex64::new(-s / (PI * x).cosh(), 0.0))
    });
    let (a, b) = ab.into_iter().unzip();
    Ok(ContinuousSpectrum::from_ab(xi.to_vec(), a, b))
}

/// Signal resampled on a refined copy of a base grid.
pub struct RefinedOracle {
    grid: Grid,
    steps: Vec<StepSamples>,
}

impl RefinedOracle {
    /// Resample `signal` on `[t1, t2]` with `steps * refine` steps.
    pub fn new<F>(signal: F, kappa: Kappa, t1: f64, t2: f64, steps: usize, refine: usize) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        if refine < 8 {
            return Err(NftError::RefineTooSmall(refine));
        }
        let grid = build_grid(t1, t2, steps * refine)?;
        let pot = SampledPotential::from_fn(&grid, kappa, signal)?;
        let steps = (0..grid.steps()).map(|k| StepSamples::of_step(&pot, k)).collect();
        Ok(RefinedOracle { grid, steps })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `(a, b)` at one spectral parameter, `None` on overflow.
    pub fn propagate(&self, zeta: Complex64) -> Option<(Complex64, Complex64)> {
        let i = Complex64::new(0.0, 1.0);
        let h = self.grid.h();
        let mut v = [(-i * zeta * self.grid.t1()).exp(), Complex64::new(0.0, 0.0)];
        for s in &self.steps {
            v = step_cf24(s, zeta, h).apply(v);
        }
        if !(v[0].norm() <= 1e300 && v[1].norm() <= 1e300) {
            return None;
        }
        Some((v[0] * (i * zeta * self.grid.t2()).exp(), v[1] * (-i * zeta * self.grid.t2()).exp()))
    }

    pub fn spectrum(&self, xi: &[f64]) -> ContinuousSpectrum {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let ab = par::map(xi, |&x| self.propagate(Complex64::new(x, 0.0)).unwrap_or((nan, nan)));
        let (a, b) = ab.into_iter().unzip();
        ContinuousSpectrum::from_ab(xi.to_vec(), a, b)
    }
}

/// Brute-force `(a, b)` from the commutator-free stepper on a grid refined
/// by `refine` (the signal is resampled, not interpolated).
#[allow(clippy::too_many_arguments)]
pub fn oracle_propagate<F>(
    signal: F,
    kappa: Kappa,
    t1: f64,
    t2: f64,
    steps: usize,
    zeta: Complex64,
    refine: usize,
) -> Result<(Complex64, Complex64)>
where
    F: Fn(f64) -> Complex64,
{
    RefinedOracle::new(signal, kappa, t1, t2, steps, refine)?
        .propagate(zeta)
        .ok_or_else(|| NftError::Unsupported(format!("state overflow at zeta = {zeta}")))
}

/// Which coefficient the error measure compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    B,
    Rho,
}

impl std::str::FromStr for Target {
    type Err = NftError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "b" | "b_coeff" => Ok(Target::B),
            "rho" => Ok(Target::Rho),
            other => Err(NftError::Unsupported(format!("unknown target `{other}`"))),
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Target::B => "b",
            Target::Rho => "rho",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub e_rel: f64,
    pub domain: SpectralGrid,
    pub target: Target,
    /// Nodes dropped because either side was NaN.
    pub excluded: usize,
}

fn trapezoid(xi: &[f64], f: &[f64]) -> f64 {
    xi.windows(2).zip(f.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]).abs() * (y[0] + y[1])).sum()
}

/// `‖f − f_N‖ / ‖f‖` in `L²(Ω_h)` by the trapezoidal rule.
///
/// `num`, `reference` and `domain` must carry the same nodes. Nodes where
/// either side is NaN are dropped pairwise.
pub fn rel_error(
    num: &ContinuousSpectrum,
    reference: &ContinuousSpectrum,
    domain: &SpectralGrid,
    target: Target,
) -> Result<ErrorReport> {
    let n = domain.len();
    if num.len() != n || reference.len() != n {
        return Err(NftError::GridMismatch(format!(
            "{} / {} nodes against a domain of {n}",
            num.len(),
            reference.len()
        )));
    }
    let scale = domain.xi().iter().map(|x| x.abs()).fold(1.0, f64::max);
    for j in 0..n {
        let x = domain.xi()[j];
        if (num.xi[j] - x).abs() > 1e-12 * scale || (reference.xi[j] - x).abs() > 1e-12 * scale {
            return Err(NftError::GridMismatch(format!("node {j} differs")));
        }
    }
    let pick = |s: &ContinuousSpectrum| -> Vec<Complex64> {
        match target {
            Target::B => s.b.clone(),
            Target::Rho => s.rho.clone(),
        }
    };
    let (f, g) = (pick(num), pick(reference));
    let finite = |v: &Complex64| v.re.is_finite() && v.im.is_finite();
    let keep: Vec<usize> = (0..n).filter(|&j| finite(&f[j]) && finite(&g[j])).collect();
    let xi: Vec<f64> = keep.iter().map(|&j| domain.xi()[j]).collect();
    let diff: Vec<f64> = keep.iter().map(|&j| (f[j] - g[j]).norm_sqr()).collect();
    let refn: Vec<f64> = keep.iter().map(|&j| g[j].norm_sqr()).collect();
    let den = trapezoid(&xi, &refn);
    if !(den > 0.0) {
        return Err(NftError::ZeroReference);
    }
    Ok(ErrorReport {
        e_rel: (trapezoid(&xi, &diff) / den).sqrt(),
        domain: domain.clone(),
        target,
        excluded: n - keep.len(),
    })
}
