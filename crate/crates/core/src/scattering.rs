//! Discrete scattering coefficients through the fast (polynomial) and the
//! direct (per spectral node) pipelines.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{NftError, Result};
use crate::grid::{Grid, Method, SampledPotential, SpectralGrid};
use crate::integrators::{
    step_erk34, step_irk34, step_scf24, MagnusStep, Mat2, StepFactor, StepSamples, StepVariable,
};
use crate::par;
use crate::poly::{eval_roots_of_unity, poly_tree_product, tree_product, ComplexPoly};

/// Magnitude below which `D(z_j)` or `a_j` is treated as a zero.
pub const ZERO_DIVISOR: f64 = 1e-14;

/// Components of the state vector above this magnitude flag the node.
pub const OVERFLOW_GUARD: f64 = 1e300;

/// Which pipeline produced (or should produce) a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pipeline {
    /// Tree product of step polynomials, evaluated by FFT.
    Fast,
    /// Sequential numeric products per spectral node.
    Direct,
}

impl Pipeline {
    /// The fast pipeline where the method supports it, direct otherwise.
    pub fn preferred(method: Method) -> Self {
        if method.is_polynomial() {
            Pipeline::Fast
        } else {
            Pipeline::Direct
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Fast => "fast",
            Pipeline::Direct => "direct",
        })
    }
}

impl FromStr for Pipeline {
    type Err = NftError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fast" => Ok(Pipeline::Fast),
            "direct" => Ok(Pipeline::Direct),
            other => Err(NftError::Unsupported(format!("unknown pipeline `{other}`"))),
        }
    }
}

/// Jost polynomials after all steps.
///
/// `a(x) = x^{s(ℓ₋+ℓ₊)+p} P₁(x)/D(x)` and `b(x) = x^{s(ℓ₋−ℓ₊)+p} P₂(x)/D(x)`
/// where `s` is the number of powers of `x` per `exp(iζh)` and `p` the
/// accumulated per-step prefactor power.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteScattering {
    pub p1: ComplexPoly,
    pub p2: ComplexPoly,
    pub d: ComplexPoly,
    pub var: StepVariable,
    pub ell_minus: i64,
    pub ell_plus: i64,
    pub h: f64,
    /// Number of samples `N = 2 Ns` of the source grid.
    pub samples: usize,
    pub method: Method,
    pub prefactor_power: i64,
}

impl DiscreteScattering {
    /// Default evaluation size: `2N` for `x = z²`, `8N` for `x = z`.
    pub fn default_nodes(&self) -> usize {
        let n = match self.var {
            StepVariable::ZSquared => 2 * self.samples,
            StepVariable::Z => 8 * self.samples,
        };
        n.next_power_of_two()
    }

    fn exponents(&self) -> (i64, i64) {
        let s = self.var.powers_per_step();
        (
            s * (self.ell_minus + self.ell_plus) + self.prefactor_power,
            s * (self.ell_minus - self.ell_plus) + self.prefactor_power,
        )
    }

    /// Evaluate `a` and `b` at one spectral parameter by Horner's rule.
    pub fn eval_at(&self, zeta: Complex64) -> (Complex64, Complex64) {
        let x = self.var.x_of(zeta, self.h);
        let (ea, eb) = self.exponents();
        let d = self.d.eval(x);
        (x.powi(ea as i32) * self.p1.eval(x) / d, x.powi(eb as i32) * self.p2.eval(x) / d)
    }
}

/// Continuous spectrum sampled on real nodes `ξ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousSpectrum {
    pub xi: Vec<f64>,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub rho: Vec<Complex64>,
    /// Nodes whose values were replaced by NaN.
    pub nan_count: usize,
}

impl ContinuousSpectrum {
    /// Build from `a` and `b`, filling `ρ`.
    pub fn from_ab(xi: Vec<f64>, a: Vec<Complex64>, b: Vec<Complex64>) -> Self {
        let n = xi.len();
        assert!(a.len() == n && b.len() == n, "spectrum arrays differ in length");
        let nan_count = a.iter().zip(&b).filter(|(x, y)| is_nan(**x) || is_nan(**y)).count();
        reflection(ContinuousSpectrum { xi, a, b, rho: Vec::new(), nan_count })
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// Keep the nodes with `ξ ∈ [-π/2h, π/2h)`.
    pub fn principal_branch(&self, h: f64) -> Self {
        let w = PI / (2.0 * h);
        let tol = 1e-9 * w;
        self.filter(|x| x >= -w - tol && x < w - tol)
    }

    fn filter(&self, keep: impl Fn(f64) -> bool) -> Self {
        let idx: Vec<usize> = (0..self.len()).filter(|&j| keep(self.xi[j])).collect();
        let pick = |v: &[Complex64]| idx.iter().map(|&j| v[j]).collect::<Vec<_>>();
        let a = pick(&self.a);
        let b = pick(&self.b);
        let rho = pick(&self.rho);
        let nan_count = a.iter().zip(&b).filter(|(x, y)| is_nan(**x) || is_nan(**y)).count();
        ContinuousSpectrum { xi: idx.iter().map(|&j| self.xi[j]).collect(), a, b, rho, nan_count }
    }

    /// Write `xi,re_a,im_a,re_b,im_b,re_rho,im_rho` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "xi,re_a,im_a,re_b,im_b,re_rho,im_rho")?;
        for j in 0..self.len() {
            let (a, b, r) = (self.a[j], self.b[j], self.rho[j]);
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.xi[j], a.re, a.im, b.re, b.im, r.re, r.im
            )?;
        }
        Ok(())
    }
}

const NAN: Complex64 = Complex64::new(f64::NAN, f64::NAN);

fn is_nan(v: Complex64) -> bool {
    v.re.is_nan() || v.im.is_nan()
}

/// Fill `ρ = b/a`, NaN where `|a| < 1e-14`.
pub fn reflection(mut spec: ContinuousSpectrum) -> ContinuousSpectrum {
    spec.rho = spec
        .a
        .iter()
        .zip(&spec.b)
        .map(|(a, b)| if a.norm() < ZERO_DIVISOR || is_nan(*a) { NAN } else { b / a })
        .collect();
    spec
}

enum Kernel {
    Poly(StepFactor),
    Magnus(MagnusStep),
}

impl Kernel {
    fn build(method: Method, s: &StepSamples) -> Result<Self> {
        Ok(match method {
            Method::Erk34 => Kernel::Poly(step_erk34(s)),
            Method::Irk34 => Kernel::Poly(step_irk34(s)?),
            Method::Scf24 => Kernel::Poly(step_scf24(s)?),
            Method::M12 => Kernel::Magnus(MagnusStep::m12(s)),
            Method::M34 => Kernel::Magnus(MagnusStep::m34(s)),
            Method::Cf24 => Kernel::Magnus(MagnusStep::cf24(s)),
        })
    }
}

fn check_potential(pot: &SampledPotential, grid: &Grid) -> Result<()> {
    let expected = grid.samples() + 1;
    if pot.q().len() != expected {
        return Err(NftError::LengthMismatch { expected, got: pot.q().len() });
    }
    Ok(())
}

/// Polynomial step factor for one of the three polynomial-form methods.
pub fn step_factor(method: Method, s: &StepSamples) -> Result<StepFactor> {
    match Kernel::build(method, s)? {
        Kernel::Poly(f) => Ok(f),
        Kernel::Magnus(_) => Err(NftError::NotPolynomial(method)),
    }
}

/// Fast pipeline: multiply all step polynomials in a balanced tree.
///
/// Step `k` consumes samples `2k, 2k+1, 2k+2`. `P₀ = (1, 0)ᵀ`, `D₀ = 1`.
pub fn scatter_fast(method: Method, pot: &SampledPotential, grid: &Grid) -> Result<DiscreteScattering> {
    if !method.is_polynomial() {
        return Err(NftError::NotPolynomial(method));
    }
    check_potential(pot, grid)?;
    let factors: Vec<StepFactor> = par::map_range(grid.steps(), |k| {
        step_factor(method, &StepSamples::of_step(pot, k)).map_err(|e| e.at_step(k))
    })
    .into_iter()
    .collect::<Result<_>>()?;

    let var = factors[0].var;
    let prefactor_power = factors.iter().map(|f| f.prefactor_power).sum();
    let (ms, ds): (Vec<_>, Vec<_>) = factors.into_iter().map(|f| (f.m, f.delta)).unzip();
    let (total, d) = if method == Method::Irk34 {
        par::join(|| tree_product(&ms), || poly_tree_product(&ds))
    } else {
        (tree_product(&ms), Ok(ComplexPoly::one()))
    };
    let total = total?;
    Ok(DiscreteScattering {
        p1: total.e11,
        p2: total.e21,
        d: d?,
        var,
        ell_minus: grid.ell_minus(),
        ell_plus: grid.ell_plus(),
        h: grid.h(),
        samples: grid.samples(),
        method,
        prefactor_power,
    })
}

/// Evaluate the discrete coefficients on `nodes` roots of unity.
///
/// `nodes` defaults to [`DiscreteScattering::default_nodes`] and is rounded
/// up to a power of two. Output is ordered by ascending `ξ`, node
/// `j ∈ [-M/2, M/2)` sitting at `ξ_j = 2π s j / (M h)`; with the default size
/// this is `ξ_j = jπ/(N h)`.
pub fn evaluate_spectrum(ds: &DiscreteScattering, nodes: Option<usize>) -> Result<ContinuousSpectrum> {
    let m = nodes.unwrap_or_else(|| ds.default_nodes()).next_power_of_two();
    let (vp1, (vp2, vd)) = par::join(
        || eval_roots_of_unity(&ds.p1, m),
        || {
            par::join(
                || eval_roots_of_unity(&ds.p2, m),
                || {
                    if ds.d.degree() == 0 {
                        Ok(vec![ds.d.coeffs()[0]; m])
                    } else {
                        eval_roots_of_unity(&ds.d, m)
                    }
                },
            )
        },
    );
    let (vp1, vp2, vd) = (vp1?, vp2?, vd?);

    let mi = m as i64;
    let roots: Vec<Complex64> =
        (0..m).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)).collect();
    let (ea, eb) = ds.exponents();
    let s = ds.var.powers_per_step() as f64;
    let mut xi = Vec::with_capacity(m);
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for j in -mi / 2..mi / 2 {
        let idx = j.rem_euclid(mi) as usize;
        xi.push(2.0 * PI * s * j as f64 / (m as f64 * ds.h));
        let d = vd[idx];
        if d.norm() < ZERO_DIVISOR || is_nan(d) {
            a.push(NAN);
            b.push(NAN);
            continue;
        }
        // exact unit phases x_j^e with the exponent reduced modulo M
        let pa = roots[(j * ea).rem_euclid(mi) as usize];
        let pb = roots[(j * eb).rem_euclid(mi) as usize];
        a.push(pa * vp1[idx] / d);
        b.push(pb * vp2[idx] / d);
    }
    let mut spec = ContinuousSpectrum::from_ab(xi, a, b);
    spec.nan_count += spec.a.iter().filter(|v| !is_nan(**v) && v.norm() < ZERO_DIVISOR).count();
    Ok(spec)
}

/// Direct pipeline: propagate `(e^{-iζT₁}, 0)ᵀ` through all steps for every
/// `ζ`, then read `a = v₁ e^{iζT₂}` and `b = v₂ e^{-iζT₂}`.
pub fn scatter_direct(
    method: Method,
    pot: &SampledPotential,
    grid: &Grid,
    zetas: &[Complex64],
) -> Result<ContinuousSpectrum> {
    check_potential(pot, grid)?;
    let kernels: Vec<Kernel> = (0..grid.steps())
        .map(|k| Kernel::build(method, &StepSamples::of_step(pot, k)).map_err(|e| e.at_step(k)))
        .collect::<Result<_>>()?;
    let h = grid.h();
    let (t1, t2) = (grid.t1(), grid.t2());

    let ab = par::map(zetas, |&zeta| {
        let i = Complex64::new(0.0, 1.0);
        let mut v = [(-i * zeta * t1).exp(), Complex64::new(0.0, 0.0)];
        for (k, kernel) in kernels.iter().enumerate() {
            let step: Mat2 = match kernel {
                Kernel::Poly(f) => f.propagator(zeta, h),
                Kernel::Magnus(m) => m.propagator(zeta, h),
            };
            v = step.apply(v);
            // cheap periodic check; any overflow persists once it occurs
            if k % 64 == 63 && !(v[0].norm() <= OVERFLOW_GUARD && v[1].norm() <= OVERFLOW_GUARD) {
                return (NAN, NAN);
            }
        }
        if !(v[0].norm() <= OVERFLOW_GUARD && v[1].norm() <= OVERFLOW_GUARD) {
            return (NAN, NAN);
        }
        (v[0] * (i * zeta * t2).exp(), v[1] * (-i * zeta * t2).exp())
    });
    let xi = zetas.iter().map(|z| z.re).collect();
    let (a, b) = ab.into_iter().unzip();
    Ok(ContinuousSpectrum::from_ab(xi, a, b))
}

/// Spectrum of `method` on the shared principal-branch nodes
/// [`SpectralGrid::principal`], through the requested pipeline.
pub fn principal_spectrum(
    method: Method,
    pot: &SampledPotential,
    grid: &Grid,
    pipeline: Pipeline,
) -> Result<ContinuousSpectrum> {
    match pipeline {
        Pipeline::Fast => {
            let ds = scatter_fast(method, pot, grid)?;
            Ok(evaluate_spectrum(&ds, None)?.principal_branch(grid.h()))
        }
        Pipeline::Direct => {
            scatter_direct(method, pot, grid, &SpectralGrid::principal(grid).zetas())
        }
    }
}

/// Nodes `ξ_j` written by the default output of each method: all `N′`
/// evaluation nodes of [`evaluate_spectrum`] for the polynomial methods,
/// the principal-branch nodes for the Magnus family.
pub fn output_nodes(method: Method, grid: &Grid) -> Vec<f64> {
    let (s, m) = match method {
        Method::Erk34 | Method::Irk34 => (1.0, 2 * grid.samples()),
        Method::Scf24 => (4.0, 8 * grid.samples()),
        _ => return SpectralGrid::principal(grid).xi().to_vec(),
    };
    let m = m.next_power_of_two() as i64;
    (-m / 2..m / 2).map(|j| 2.0 * PI * s * j as f64 / (m as f64 * grid.h())).collect()
}
