//! Complex single-photon amplitudes sampled on a [`Grid`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// A sampled complex amplitude with the L² norm convention
/// `norm² = Σ |amp_k|² · dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    grid: Grid,
    amp: Vec<Complex64>,
}

impl Field1D {
    /// Wrap raw samples. The sample count must match the grid.
    pub fn new(grid: Grid, amp: Vec<Complex64>) -> Result<Self> {
        if amp.len() != grid.len() {
            return Err(Error::invalid(format!(
                "field has {} samples but grid has {}",
                amp.len(),
                grid.len()
            )));
        }
        Ok(Field1D { grid, amp })
    }

    /// Evaluate `f` at every sample position.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let amp = grid.positions().map(f).collect();
        Field1D { grid, amp }
    }

    /// L²-normalized Gaussian mode `amp(x) ∝ exp(-(x-center)²/waist²)`.
    ///
    /// Fails with a resolution error when the waist is narrower than four
    /// samples or when more than 1e-8 of the mode energy falls outside the
    /// grid.
    pub fn gaussian(grid: &Grid, center: f64, waist: f64) -> Result<Self> {
        if !(waist > 0.0) {
            return Err(Error::invalid(format!("waist must be positive, got {waist}")));
        }
        if waist < 4.0 * grid.dx() {
            return Err(Error::resolution(format!(
                "waist {waist} is narrower than 4 samples (dx = {})",
                grid.dx()
            )));
        }
        let mut amp: Vec<Complex64> = grid
            .positions()
            .map(|x| {
                let u = (x - center) / waist;
                Complex64::new((-u * u).exp(), 0.0)
            })
            .collect();
        // The discrete energy of a well-resolved Gaussian matches the
        // analytic integral w·sqrt(pi/2) to far better than the truncation
        // budget, so the deficit measures energy lost off the grid edges.
        let energy: f64 = amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.dx();
        let analytic = waist * (std::f64::consts::PI / 2.0).sqrt();
        if energy < analytic * (1.0 - 1e-8) {
            return Err(Error::resolution(format!(
                "Gaussian at {center} with waist {waist} is truncated by the grid \
                 ({:.3e} of its energy lies outside)",
                1.0 - energy / analytic
            )));
        }
        let scale = 1.0 / energy.sqrt();
        for a in &mut amp {
            *a *= scale;
        }
        Ok(Field1D { grid: *grid, amp })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amp(&self) -> &[Complex64] {
        &self.amp
    }

    /// `Σ |amp_k|² dx`.
    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    /// `⟨self|other⟩ = Σ conj(self_k)·other_k · dx`.
    pub fn inner(&self, other: &Field1D) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::invalid("inner product of fields on different grids"));
        }
        let s: Complex64 = self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.grid.dx())
    }

    /// Pointwise intensity `|amp_k|²`.
    pub fn intensity(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Samples in reversed order; on a symmetric grid this is the parity
    /// image `x -> -x`.
    pub fn reversed(&self) -> Field1D {
        let amp = self.amp.iter().rev().copied().collect();
        Field1D { grid: self.grid, amp }
    }

    /// Pointwise product with a sampled transmission function.
    pub(crate) fn mul_samples(&self, factors: &[Complex64]) -> Field1D {
        debug_assert_eq!(factors.len(), self.amp.len());
        let amp = self
            .amp
            .iter()
            .zip(factors)
            .map(|(a, m)| a * m)
            .collect();
        Field1D { grid: self.grid, amp }
    }

    /// `alpha·self + beta·other`.
    pub fn linear_combination(
        &self,
        alpha: Complex64,
        other: &Field1D,
        beta: Complex64,
    ) -> Result<Field1D> {
        if self.grid != other.grid {
            return Err(Error::invalid("fields on different grids"));
        }
        let amp = self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(Field1D { grid: self.grid, amp })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::symmetric(256, 8.0).unwrap()
    }

    #[test]
    fn centered_gaussian_is_even() {
        let f = Field1D::gaussian(&grid(), 0.0, 0.7).unwrap();
        let n = f.amp().len();
        for k in 0..n {
            assert!((f.amp()[k] - f.amp()[n - 1 - k]).norm() < 1e-12);
        }
    }

    #[test]
    fn gaussian_is_normalized() {
        for (c, w) in [(0.0, 0.5), (1.25, 1.0), (-2.0, 0.3)] {
            let f = Field1D::gaussian(&grid(), c, w).unwrap();
            assert!((f.norm_sqr() - 1.0).abs() < 1e-12, "norm² off for c={c}, w={w}");
        }
    }

    #[test]
    fn unresolvable_waist_is_rejected() {
        let g = grid();
        let err = Field1D::gaussian(&g, 0.0, g.dx() / 2.0).unwrap_err();
        assert!(matches!(err, Error::Resolution(_)));
    }

    #[test]
    fn truncated_mode_is_rejected() {
        // Mode centered right at the grid edge loses half its energy.
        let err = Field1D::gaussian(&grid(), 7.9, 1.0).unwrap_err();
        assert!(matches!(err, Error::Resolution(_)));
    }

    #[test]
    fn inner_product_of_displaced_gaussians_decays() {
        let g = grid();
        let a = Field1D::gaussian(&g, -1.0, 0.5).unwrap();
        let b = Field1D::gaussian(&g, 1.0, 0.5).unwrap();
        // analytic overlap exp(-(x_b-x_a)²/(2 w²)) = exp(-8)
        let overlap = a.inner(&b).unwrap();
        assert!((overlap.re - (-8.0f64).exp()).abs() < 1e-9);
        assert!(overlap.im.abs() < 1e-15);
    }

    #[test]
    fn reversal_is_parity_on_symmetric_grid() {
        let g = grid();
        let f = Field1D::gaussian(&g, 1.0, 0.5).unwrap();
        let r = f.reversed();
        let direct = Field1D::gaussian(&g, -1.0, 0.5).unwrap();
        for (a, b) in r.amp().iter().zip(direct.amp()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
