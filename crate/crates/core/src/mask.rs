//! Declarative one-dimensional Fourier-plane masks and their sampling.
//!
//! A mask is a complex transmission function `M(x)` applied pointwise in the
//! Fourier plane. Acting on a two-photon amplitude it becomes the external
//! product `M(x₁)·M(x₂)` — the class of two-photon filters reachable with a
//! classical one-dimensional mask. [`two_photon_mask`] materializes that
//! product for diagnostics.
//!
//! Periodic specs are evaluated through the reduced cell coordinate
//! `frac((x - x0)/period)`, so on a grid whose pitch is commensurate with the
//! period, samples one period apart receive bit-identical values.

use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Description of a one-dimensional complex transmission function.
#[derive(Debug, Clone, PartialEq)]
pub enum MaskSpec {
    /// Phase-only `M(x) = exp(i·amplitude·cos(2π·frequency·(x - origin)))`.
    Sinusoidal {
        /// Phase swing in radians.
        amplitude: f64,
        /// Spatial frequency in cycles/mm.
        frequency: f64,
        /// Phase origin in mm.
        origin: f64,
    },
    /// Phase-only quarter-cell filter: `exp(i·delta)` on the central quarter
    /// of each cell `[origin + m·period, origin + (m+1)·period)`, 1 elsewhere.
    /// Membership is the half-open band `|frac - 1/2| < 1/8` of the reduced
    /// cell coordinate (strict on both edges).
    ZernikeQuarter {
        /// Extra phase in radians (π/4 approximates a Zernike filter).
        delta: f64,
        /// Cell width in mm.
        period: f64,
        /// Cell origin in mm.
        origin: f64,
    },
    /// 0/1 slit: transmits `[center - width/2, center + width/2]`.
    Aperture { center: f64, width: f64 },
    /// Pointwise product of the members.
    Composite(Vec<MaskSpec>),
    /// Explicit sample table on its own grid.
    Custom { grid: Grid, values: Vec<Complex64> },
}

impl MaskSpec {
    /// Whether the spec is unit-modulus by construction (Custom masks are
    /// checked sample by sample).
    pub fn is_phase_only(&self) -> bool {
        match self {
            MaskSpec::Sinusoidal { .. } | MaskSpec::ZernikeQuarter { .. } => true,
            MaskSpec::Aperture { .. } => false,
            MaskSpec::Composite(members) => members.iter().all(MaskSpec::is_phase_only),
            MaskSpec::Custom { values, .. } => {
                values.iter().all(|v| (v.norm() - 1.0).abs() <= 1e-12)
            }
        }
    }

    /// Load a custom mask from a two-column text file `x  phase` (radians).
    ///
    /// Lines starting with `#` and blank lines are skipped. The file must
    /// list every sample of `grid` in order, with x matching the grid
    /// position exactly (to within 1e-12 of the span).
    pub fn custom_from_file(path: impl AsRef<Path>, grid: &Grid) -> Result<MaskSpec> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read mask file {}: {e}", path.display())))?;
        let tol = 1e-12 * grid.span();
        let mut values = Vec::with_capacity(grid.len());
        let mut k = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (xs, ps) = match (cols.next(), cols.next(), cols.next()) {
                (Some(x), Some(p), None) => (x, p),
                _ => {
                    return Err(Error::invalid(format!(
                        "{}:{}: expected two columns `x phase`",
                        path.display(),
                        lineno + 1
                    )))
                }
            };
            let x: f64 = xs.parse().map_err(|_| {
                Error::invalid(format!("{}:{}: bad x value {xs:?}", path.display(), lineno + 1))
            })?;
            let phase: f64 = ps.parse().map_err(|_| {
                Error::invalid(format!("{}:{}: bad phase value {ps:?}", path.display(), lineno + 1))
            })?;
            if k >= grid.len() {
                return Err(Error::invalid(format!(
                    "{}:{}: more samples than the {}-point grid",
                    path.display(),
                    lineno + 1,
                    grid.len()
                )));
            }
            if (x - grid.x(k)).abs() > tol {
                return Err(Error::invalid(format!(
                    "{}:{}: x = {x} does not match grid sample {} at {}",
                    path.display(),
                    lineno + 1,
                    k,
                    grid.x(k)
                )));
            }
            values.push(Complex64::from_polar(1.0, phase));
            k += 1;
        }
        if k != grid.len() {
            return Err(Error::invalid(format!(
                "{}: has {k} samples, grid needs {}",
                path.display(),
                grid.len()
            )));
        }
        Ok(MaskSpec::Custom { grid: *grid, values })
    }
}

/// A mask evaluated on a specific grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskSamples {
    grid: Grid,
    values: Vec<Complex64>,
}

impl MaskSamples {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Largest deviation of `|M_k|` from 1.
    pub fn modulus_defect(&self) -> f64 {
        self.values
            .iter()
            .map(|v| (v.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn check_periodic(grid: &Grid, period: f64, what: &str) -> Result<()> {
    if !(period > 0.0) {
        return Err(Error::invalid(format!("{what}: period must be positive, got {period}")));
    }
    if grid.span() < 2.0 * period {
        return Err(Error::resolution(format!(
            "{what}: grid spans {} mm, less than two periods of {period} mm",
            grid.span()
        )));
    }
    if grid.dx() >= period / 8.0 {
        return Err(Error::resolution(format!(
            "{what}: undersampled, dx = {} but period/8 = {}",
            grid.dx(),
            period / 8.0
        )));
    }
    Ok(())
}

/// Reduced cell coordinate in [0, 1).
fn cell_frac(x: f64, origin: f64, period: f64) -> f64 {
    let t = (x - origin) / period;
    t - t.floor()
}

/// Evaluate `spec` at every sample of `grid`.
pub fn sample_mask(spec: &MaskSpec, grid: &Grid) -> Result<MaskSamples> {
    let values = match spec {
        MaskSpec::Sinusoidal { amplitude, frequency, origin } => {
            if !(*frequency > 0.0) {
                return Err(Error::invalid(format!(
                    "sinusoidal mask: frequency must be positive, got {frequency}"
                )));
            }
            let period = 1.0 / frequency;
            check_periodic(grid, period, "sinusoidal mask")?;
            grid.positions()
                .map(|x| {
                    let r = cell_frac(x, *origin, period);
                    Complex64::from_polar(1.0, amplitude * (std::f64::consts::TAU * r).cos())
                })
                .collect()
        }
        MaskSpec::ZernikeQuarter { delta, period, origin } => {
            check_periodic(grid, *period, "quarter-cell mask")?;
            let shifted = Complex64::from_polar(1.0, *delta);
            grid.positions()
                .map(|x| {
                    let r = cell_frac(x, *origin, *period);
                    if (r - 0.5).abs() < 0.125 {
                        shifted
                    } else {
                        Complex64::new(1.0, 0.0)
                    }
                })
                .collect()
        }
        MaskSpec::Aperture { center, width } => {
            if !(*width > 0.0) {
                return Err(Error::invalid(format!(
                    "aperture: width must be positive, got {width}"
                )));
            }
            grid.positions()
                .map(|x| {
                    if (x - center).abs() <= width / 2.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        }
        MaskSpec::Composite(members) => {
            let mut values = vec![Complex64::new(1.0, 0.0); grid.len()];
            for member in members {
                let m = sample_mask(member, grid)?;
                for (v, f) in values.iter_mut().zip(m.values()) {
                    *v *= f;
                }
            }
            values
        }
        MaskSpec::Custom { grid: own, values } => {
            if own != grid {
                return Err(Error::invalid(
                    "custom mask was tabulated on a different grid".to_string(),
                ));
            }
            if values.len() != grid.len() {
                return Err(Error::invalid(format!(
                    "custom mask has {} samples, grid needs {}",
                    values.len(),
                    grid.len()
                )));
            }
            values.clone()
        }
    };
    Ok(MaskSamples { grid: *grid, values })
}

/// The external product `M2_{jk} = M_j · M_k` realized as an n×n array.
pub fn two_photon_mask(spec: &MaskSpec, grid: &Grid) -> Result<Array2<Complex64>> {
    let m = sample_mask(spec, grid)?;
    let n = grid.len();
    let v = m.values();
    Ok(Array2::from_shape_fn((n, n), |(j, k)| v[j] * v[k]))
}
