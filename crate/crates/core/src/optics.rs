//! The exact lens Fourier transform between conjugate grids.
//!
//! A thin lens of focal length `f` maps an amplitude in its back focal plane
//! to the scaled Fourier transform in its front focal plane, with kernel
//! `exp(-2πi x_f x_i / (λf))`. On cell-centered grids obeying the reciprocity
//! relation
//!
//! ```text
//! dx_in · dx_out · n = λf
//! ```
//!
//! this kernel is an exactly unitary n×n matrix, and factors into pre/post
//! linear phases around a plain DFT, so the fast path runs in O(n log n).
//! [`lens_fourier_quadrature`] evaluates the same kernel as a direct O(n²)
//! sum and is kept as an independent reference for tests.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::field::Field1D;
use crate::grid::Grid;

const TAU: f64 = std::f64::consts::TAU;

/// Wavelength and focal length of one lens (mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticsParams {
    wavelength: f64,
    focal_length: f64,
}

impl OpticsParams {
    pub fn new(wavelength: f64, focal_length: f64) -> Result<Self> {
        if !(wavelength > 0.0) {
            return Err(Error::invalid(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        if !(focal_length > 0.0) {
            return Err(Error::invalid(format!(
                "focal length must be positive, got {focal_length}"
            )));
        }
        Ok(OpticsParams { wavelength, focal_length })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn focal_length(&self) -> f64 {
        self.focal_length
    }

    /// The product λf that sets the Fourier-plane scale.
    pub fn lambda_f(&self) -> f64 {
        self.wavelength * self.focal_length
    }
}

/// The grid conjugate to `grid` under the reciprocity relation, centered on
/// the optical axis: same sample count, spacing `λf / (n·dx)`.
pub fn conjugate_grid(grid: &Grid, optics: OpticsParams) -> Grid {
    let n = grid.len();
    let dx_out = optics.lambda_f() / (n as f64 * grid.dx());
    Grid::symmetric(n, 0.5 * n as f64 * dx_out).expect("conjugate grid is valid by construction")
}

fn check_reciprocity(input: &Grid, output: &Grid, lambda_f: f64) -> Result<()> {
    if input.len() != output.len() {
        return Err(Error::sampling(format!(
            "lens transform needs equal sample counts, got {} -> {}",
            input.len(),
            output.len()
        )));
    }
    let product = input.dx() * output.dx() * input.len() as f64;
    if ((product - lambda_f) / lambda_f).abs() > 1e-12 {
        return Err(Error::sampling(format!(
            "grids violate dx_in·dx_out·n = λf (got {product:.6e}, need {lambda_f:.6e}); \
             derive the output grid with conjugate_grid"
        )));
    }
    Ok(())
}

/// Unitary lens Fourier transform, fast path.
///
/// `out_k = dx_in/√(λf) · Σ_j exp(-2πi x_k x_j/(λf)) · amp_j`, evaluated by
/// splitting the kernel into linear phases around a DFT. Norm is preserved
/// to machine precision on conjugate grids.
pub fn lens_fourier(field: &Field1D, optics: OpticsParams, out_grid: &Grid) -> Result<Field1D> {
    let in_grid = field.grid();
    let lambda_f = optics.lambda_f();
    check_reciprocity(in_grid, out_grid, lambda_f)?;

    let n = in_grid.len();
    let nf = n as f64;
    let (x0i, dxi) = (in_grid.x_min(), in_grid.dx());
    let (x0o, dxo) = (out_grid.x_min(), out_grid.dx());

    // x_k·x_j/λf = g0 + A·j + B·k + jk/n  for cell-centered coordinates.
    let pre = x0o * dxi / lambda_f + 0.5 / nf;
    let post = x0i * dxo / lambda_f + 0.5 / nf;
    let global = x0o * x0i / lambda_f + (x0o * dxi + x0i * dxo) / (2.0 * lambda_f) + 0.25 / nf;

    let mut buf: Vec<Complex64> = field
        .amp()
        .iter()
        .enumerate()
        .map(|(j, a)| a * Complex64::from_polar(1.0, -TAU * pre * j as f64))
        .collect();

    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let scale = dxi / lambda_f.sqrt();
    let g = Complex64::from_polar(scale, -TAU * global);
    let amp = buf
        .into_iter()
        .enumerate()
        .map(|(k, v)| v * g * Complex64::from_polar(1.0, -TAU * post * k as f64))
        .collect();
    Field1D::new(*out_grid, amp)
}

/// Direct O(n²) quadrature of the lens kernel; reference implementation.
pub fn lens_fourier_quadrature(
    field: &Field1D,
    optics: OpticsParams,
    out_grid: &Grid,
) -> Result<Field1D> {
    let in_grid = field.grid();
    let lambda_f = optics.lambda_f();
    check_reciprocity(in_grid, out_grid, lambda_f)?;

    let scale = in_grid.dx() / lambda_f.sqrt();
    let amp = out_grid
        .positions()
        .map(|xk| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, xj) in in_grid.positions().enumerate() {
                acc += field.amp()[j] * Complex64::from_polar(1.0, -TAU * xk * xj / lambda_f);
            }
            acc * scale
        })
        .collect();
    Field1D::new(*out_grid, amp)
}

/// A linear map acting on one photon; two-photon states apply it along each
/// coordinate independently.
pub trait SinglePhotonOp {
    fn input_grid(&self) -> &Grid;
    fn output_grid(&self) -> &Grid;
    fn apply(&self, field: &Field1D) -> Result<Field1D>;
}

/// One lens as a [`SinglePhotonOp`].
#[derive(Debug, Clone)]
pub struct LensOp {
    optics: OpticsParams,
    input: Grid,
    output: Grid,
}

impl LensOp {
    /// Lens from `input` onto its conjugate grid.
    pub fn new(input: Grid, optics: OpticsParams) -> Self {
        let output = conjugate_grid(&input, optics);
        LensOp { optics, input, output }
    }

    /// Lens between two explicit grids; they must satisfy the reciprocity
    /// relation. Pinning the output grid keeps round trips on the exact
    /// input grid instead of a rounded reconstruction of it.
    pub fn between(input: Grid, output: Grid, optics: OpticsParams) -> Result<Self> {
        check_reciprocity(&input, &output, optics.lambda_f())?;
        Ok(LensOp { optics, input, output })
    }
}

impl SinglePhotonOp for LensOp {
    fn input_grid(&self) -> &Grid {
        &self.input
    }

    fn output_grid(&self) -> &Grid {
        &self.output
    }

    fn apply(&self, field: &Field1D) -> Result<Field1D> {
        lens_fourier(field, self.optics, &self.output)
    }
}

/// The identity map on a grid.
#[derive(Debug, Clone)]
pub struct IdentityOp {
    grid: Grid,
}

impl IdentityOp {
    pub fn new(grid: Grid) -> Self {
        IdentityOp { grid }
    }
}

impl SinglePhotonOp for IdentityOp {
    fn input_grid(&self) -> &Grid {
        &self.grid
    }

    fn output_grid(&self) -> &Grid {
        &self.grid
    }

    fn apply(&self, field: &Field1D) -> Result<Field1D> {
        Ok(field.clone())
    }
}
