//! Continuous spectrum of the Zakharov-Shabat scattering problem on an
//! equispaced grid.
//!
//! Six one-step integrators are provided. Three of them (`ERK34`, `IRK34`,
//! `SCF24`) produce transfer matrices that are polynomials in a phase
//! variable, so the whole chain of steps collapses into a single matrix
//! polynomial that is multiplied out with FFT arithmetic in `O(N log² N)`
//! and evaluated on roots of unity. The Magnus family (`M12`, `M34`, `CF24`)
//! is evaluated per spectral node in `O(N²)`. Every method can also be run
//! through the direct per-node pipeline, which serves as cross-check.
//!
//! ```
//! use zsnft::{build_grid, scatter_fast, evaluate_spectrum, Method};
//! use zsnft::reference::{sech_signal, SechSpec};
//!
//! let grid = build_grid(-30.0, 30.0, 256).unwrap();
//! let pot = sech_signal(&SechSpec::new(1.5), &grid);
//! let ds = scatter_fast(Method::Erk34, &pot, &grid).unwrap();
//! let spectrum = evaluate_spectrum(&ds, None).unwrap();
//! assert_eq!(spectrum.len(), 2 * grid.samples());
//! ```

pub mod error;
pub mod gamma;
pub mod grid;
pub mod integrators;
pub mod io;
mod par;
pub mod poly;
pub mod reference;
pub mod scattering;

pub use error::{NftError, Result};
pub use grid::{build_grid, Grid, Kappa, Method, SampledPotential, SpectralGrid};
pub use integrators::{Mat2, MagnusStep, StepFactor, StepSamples, StepVariable};
pub use poly::{ComplexPoly, MatPoly2};
pub use scattering::{
    evaluate_spectrum, reflection, scatter_direct, scatter_fast, ContinuousSpectrum,
    DiscreteScattering, Pipeline,
};

pub use num_complex::Complex64;

/// `true` when the crate was built with the rayon backend.
pub const PARALLEL: bool = cfg!(feature = "parallel");
