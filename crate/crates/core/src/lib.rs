//! Classical Fourier processing of quantum light, in simulation.
//!
//! This crate propagates one- and two-photon complex amplitudes through a
//! 4-f optical filter — lens, programmable Fourier-plane mask, lens — and
//! computes the observables a coincidence experiment would record: output
//! intensity distributions and two-photon correlation maps `Γ_{q,r}`.
//!
//! The pieces:
//!
//! * [`Grid`], [`Field1D`] — physical-units sampling and single-photon
//!   amplitudes ([`grid`], [`field`]).
//! * [`lens_fourier`] — the exact unitary lens transform between conjugate
//!   grids, with an O(n²) quadrature reference ([`optics`]).
//! * [`BiphotonState`] — two-photon amplitudes with bosonic or fermionic
//!   exchange symmetry, stored dense or as a short Schmidt sum
//!   ([`biphoton`]).
//! * [`MaskSpec`] — declarative masks: sinusoidal phase gratings,
//!   quarter-cell (Zernike-like) filters, apertures, composites, custom
//!   tables ([`mask`]).
//! * [`run_4f_single`] / [`run_4f_biphoton`] — the assembled filter
//!   ([`fourf`]).
//! * [`correlation_map`] — detector-binned coincidences ([`detector`]).
//! * [`lattice`] — an independent tight-binding oracle (Bessel walk,
//!   quadrature filters) the continuous engine is validated against.
//!
//! ```
//! use biphoton_fourier::{
//!     correlation_map, lattice_frequency, run_4f_biphoton, BiphotonState, DetectorArray, Grid,
//!     MaskSpec, OpticsParams,
//! };
//!
//! let d = 0.5; // beam separation, mm
//! let grid = Grid::symmetric(1024, 16.0 * d)?;
//! let optics = OpticsParams::new(808e-6, 100.0)?;
//!
//! // both photons in the left path, or both in the right, with phase π/2
//! let input = BiphotonState::path_entangled(&grid, -d / 2.0, d / 2.0, d / 8.0, 1.5707963267948966)?;
//!
//! // a sinusoidal phase grating registered to the mode lattice
//! let mask = MaskSpec::Sinusoidal {
//!     amplitude: 0.86 * std::f64::consts::PI,
//!     frequency: lattice_frequency(optics, d),
//!     origin: 0.0,
//! };
//!
//! let output = run_4f_biphoton(&input, &mask, optics)?;
//! assert!((output.norm_sqr() - 1.0).abs() < 1e-9); // phase masks lose nothing
//!
//! let detectors = DetectorArray::lattice(-d / 2.0, d, 5, d / 4.0)?;
//! let gamma = correlation_map(&output, &detectors)?;
//! assert!(gamma.total() <= 1.0 + 1e-12); // finite fibers collect at most everything
//! # Ok::<(), biphoton_fourier::Error>(())
//! ```
//!
//! Everything is immutable after construction and every operation is a pure
//! function, so states and masks can be shared freely across threads.

pub mod biphoton;
pub mod detector;
pub mod error;
pub mod field;
pub mod fourf;
pub mod grid;
pub mod lattice;
pub mod mask;
pub mod optics;

pub use biphoton::{BiphotonState, ExchangeSymmetry, SchmidtTerm};
pub use detector::{bin_probabilities, correlation_map, CorrelationMap, DetectorArray};
pub use error::{Error, Result};
pub use field::Field1D;
pub use fourf::{lattice_frequency, run_4f_biphoton, run_4f_single};
pub use grid::Grid;
pub use lattice::{
    bessel_j, oracle_correlation, oracle_with_extra_phase, walk_coefficients,
    walk_coefficients_with_phase, CellPhase, LatticeAmplitudes, LatticeBiphoton,
    LatticeCorrelation,
};
pub use mask::{sample_mask, two_photon_mask, MaskSamples, MaskSpec};
pub use optics::{
    conjugate_grid, lens_fourier, lens_fourier_quadrature, IdentityOp, LensOp, OpticsParams,
    SinglePhotonOp,
};
