//! Time grid, sampled potential, spectral grid and method tags.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{NftError, Result};

/// Tolerance on `T1/h` and `T2/h` being integers.
const BOUNDARY_TOL: f64 = 1e-9;

/// Equispaced half-step grid `t_n = T1 + n h / 2`, `n = 0..=N`, with `N = 2 Ns`.
///
/// Each of the `Ns` steps of size `h` owns three nodes (start, midpoint,
/// end); neighbouring steps share their endpoints, so `N + 1` samples are
/// stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    t1: f64,
    t2: f64,
    h: f64,
    steps: usize,
    ell_minus: i64,
    ell_plus: i64,
    times: Vec<f64>,
}

impl Grid {
    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    /// Step size.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of steps `Ns`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `N = 2 Ns`; the grid carries `N + 1` nodes.
    pub fn samples(&self) -> usize {
        2 * self.steps
    }

    /// `ℓ₋ = -T1 / h`.
    pub fn ell_minus(&self) -> i64 {
        self.ell_minus
    }

    /// `ℓ₊ = T2 / h`.
    pub fn ell_plus(&self) -> i64 {
        self.ell_plus
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Start, midpoint and end time of step `k`.
    pub fn step_nodes(&self, k: usize) -> [f64; 3] {
        [self.times[2 * k], self.times[2 * k + 1], self.times[2 * k + 2]]
    }

    /// Half-width of the principal branch, `π / (2h)`.
    pub fn principal_half_width(&self) -> f64 {
        PI / (2.0 * self.h)
    }
}

/// Build the grid on `[t1, t2]` with `steps` steps.
///
/// Both `t1/h` and `t2/h` must be integers (within `1e-9`) so that the
/// boundary phases `(z²)^{ℓ±}` are exact.
pub fn build_grid(t1: f64, t2: f64, steps: usize) -> Result<Grid> {
    if !(t1.is_finite() && t2.is_finite()) {
        return Err(NftError::InvalidGrid("non-finite boundary".into()));
    }
    if t2 <= t1 {
        return Err(NftError::InvalidGrid(format!("need T2 > T1, got [{t1}, {t2}]")));
    }
    if steps == 0 {
        return Err(NftError::InvalidGrid("need at least one step".into()));
    }
    let h = (t2 - t1) / steps as f64;
    let lm = -t1 / h;
    let lp = t2 / h;
    let ell_minus = lm.round();
    if (lm - ell_minus).abs() > BOUNDARY_TOL * lm.abs().max(1.0) {
        return Err(NftError::NonIntegerBoundary { name: "T1", value: t1, h });
    }
    let ell_plus = lp.round();
    if (lp - ell_plus).abs() > BOUNDARY_TOL * lp.abs().max(1.0) {
        return Err(NftError::NonIntegerBoundary { name: "T2", value: t2, h });
    }
    let (ell_minus, ell_plus) = (ell_minus as i64, ell_plus as i64);
    debug_assert_eq!(ell_minus + ell_plus, steps as i64);

    let n = 2 * steps;
    let times = (0..=n).map(|j| t1 + j as f64 * (0.5 * h)).collect();
    Ok(Grid { t1, t2, h, steps, ell_minus, ell_plus, times })
}

/// Sign in `r = κ q*`. `Focusing` is `κ = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kappa {
    Focusing,
    Defocusing,
}

impl Kappa {
    pub fn sign(self) -> f64 {
        match self {
            Kappa::Focusing => -1.0,
            Kappa::Defocusing => 1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Kappa::Focusing => -1,
            Kappa::Defocusing => 1,
        }
    }
}

impl TryFrom<i32> for Kappa {
    type Error = NftError;

    fn try_from(k: i32) -> Result<Self> {
        match k {
            -1 => Ok(Kappa::Focusing),
            1 => Ok(Kappa::Defocusing),
            other => Err(NftError::InvalidKappa(other)),
        }
    }
}

/// Scaled samples `Q_n = h q(t_n)` and `R_n = h r(t_n)` on every grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    q: Vec<Complex64>,
    r: Vec<Complex64>,
    kappa: Kappa,
    boundary_warning: bool,
}

impl SampledPotential {
    /// Sample a callable signal at every node of `grid`.
    pub fn from_fn<F>(grid: &Grid, kappa: Kappa, signal: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64,
    {
        let values: Vec<Complex64> = grid.times().iter().map(|&t| signal(t)).collect();
        Self::from_values(grid, kappa, &values)
    }

    /// Take raw signal values `q(t_n)` (unscaled), one per grid node.
    pub fn from_values(grid: &Grid, kappa: Kappa, values: &[Complex64]) -> Result<Self> {
        let expected = grid.samples() + 1;
        if values.len() != expected {
            return Err(NftError::LengthMismatch { expected, got: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(NftError::NonFiniteSample { index });
        }
        let h = grid.h();
        let s = kappa.sign();
        let q: Vec<Complex64> = values.iter().map(|v| v * h).collect();
        let r = q.iter().map(|v| v.conj() * s).collect();
        let qmax = q.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let boundary_warning = q[0].norm() > 1e-12 * qmax;
        Ok(SampledPotential { q, r, kappa, boundary_warning })
    }

    /// `Q_n = h q(t_n)`.
    pub fn q(&self) -> &[Complex64] {
        &self.q
    }

    /// `R_n = κ Q_n*`.
    pub fn r(&self) -> &[Complex64] {
        &self.r
    }

    pub fn kappa(&self) -> Kappa {
        self.kappa
    }

    /// `Q_max = h ‖q‖∞` over the stored samples.
    pub fn q_max(&self) -> f64 {
        self.q.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Set when `|Q_0|` is not negligible against `max |Q|`: the boundary
    /// phases assume the signal has decayed at `T1`.
    pub fn boundary_warning(&self) -> bool {
        self.boundary_warning
    }
}

/// Spectral nodes `ξ_j`, all inside the principal branch `[-π/2h, π/2h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    xi: Vec<f64>,
    h: f64,
}

impl SpectralGrid {
    /// The `N` nodes `ξ_j = j π / (N h)`, `j = -N/2 .. N/2 - 1`, shared by all
    /// six methods.
    pub fn principal(grid: &Grid) -> Self {
        let n = grid.samples() as i64;
        let h = grid.h();
        let xi = (-n / 2..n / 2).map(|j| j as f64 * PI / (n as f64 * h)).collect();
        SpectralGrid { xi, h }
    }

    /// Wrap explicit nodes; every node must lie in the principal branch.
    pub fn from_nodes(xi: Vec<f64>, h: f64) -> Result<Self> {
        let w = PI / (2.0 * h) * (1.0 + 1e-12);
        if let Some(bad) = xi.iter().find(|x| !(x.abs() <= w)) {
            return Err(NftError::GridMismatch(format!(
                "node {bad} outside the principal branch [-{w}, {w}]"
            )));
        }
        Ok(SpectralGrid { xi, h })
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// Nodes as real-axis spectral parameters.
    pub fn zetas(&self) -> Vec<Complex64> {
        self.xi.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }
}

/// The six integrators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Classical fourth-order Runge-Kutta with integrating factor.
    Erk34,
    /// Three-stage Lobatto IIIA with integrating factor.
    Irk34,
    /// Magnus, one-point quadrature (order 2).
    M12,
    /// Magnus, fourth order with commutator.
    M34,
    /// Commutator-free Magnus, two exponentials.
    Cf24,
    /// `CF24` with each exponential split into free/potential factors.
    Scf24,
}

impl Method {
    pub const ALL: [Method; 6] =
        [Method::Erk34, Method::Irk34, Method::M12, Method::M34, Method::Cf24, Method::Scf24];

    /// Methods whose transfer matrix is a polynomial in the phase variable.
    pub fn is_polynomial(self) -> bool {
        matches!(self, Method::Erk34 | Method::Irk34 | Method::Scf24)
    }

    /// Nominal global order of accuracy.
    pub fn order(self) -> u32 {
        match self {
            Method::M12 => 2,
            _ => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Method::Erk34 => "ERK34",
            Method::Irk34 => "IRK34",
            Method::M12 => "M12",
            Method::M34 => "M34",
            Method::Cf24 => "CF24",
            Method::Scf24 => "SCF24",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = NftError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| NftError::Unsupported(format!("unknown method `{s}`")))
    }
}
