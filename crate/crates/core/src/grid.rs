//! Uniform one-dimensional spatial sampling with physical units.
//!
//! All fields, masks and detector geometry share the same [`Grid`] type. A
//! grid of `n` samples over `[x_min, x_max]` places samples at the *centers*
//! of equal cells,
//!
//! ```text
//! x_k = x_min + (k + 1/2) * dx,   dx = (x_max - x_min) / n,
//! ```
//!
//! so a grid symmetric about zero never has a sample exactly at the origin
//! and treats `+x` and `-x` symmetrically: sample `k` mirrors onto sample
//! `n - 1 - k`.

use crate::error::{Error, Result};

/// Uniform spatial grid (positions in mm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    x_min: f64,
    x_max: f64,
}

impl Grid {
    /// Grid over `[x_min, x_max]` with `n` cell-centered samples.
    pub fn new(n: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("grid needs n >= 2 samples, got {n}")));
        }
        if !(x_max - x_min).is_finite() || x_max <= x_min {
            return Err(Error::invalid(format!(
                "grid extent must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Grid { n, x_min, x_max })
    }

    /// Grid symmetric about zero: `n` samples on `[-half_extent, +half_extent]`.
    pub fn symmetric(n: usize, half_extent: f64) -> Result<Self> {
        if !(half_extent > 0.0) {
            return Err(Error::invalid(format!(
                "half extent must be positive, got {half_extent}"
            )));
        }
        Grid::new(n, -half_extent, half_extent)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sample spacing.
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn span(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Position of sample `k`.
    pub fn x(&self, k: usize) -> f64 {
        self.x_min + (k as f64 + 0.5) * self.dx()
    }

    /// All sample positions, in index order.
    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.x(k))
    }

    /// Whether the grid is symmetric about zero (up to rounding in the
    /// endpoints). Symmetric grids map `x -> -x` onto an exact reversal of
    /// the sample order.
    pub fn is_symmetric(&self) -> bool {
        (self.x_min + self.x_max).abs() <= 1e-12 * self.span()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_min && x <= self.x_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_point_grid_matches_hand_arithmetic() {
        let g = Grid::symmetric(4, 2.0).unwrap();
        assert_eq!(g.dx(), 1.0);
        let xs: Vec<f64> = g.positions().collect();
        assert_eq!(xs, vec![-1.5, -0.5, 0.5, 1.5]);
        assert!(g.is_symmetric());
    }

    #[test]
    fn spacing_is_span_over_n() {
        let g = Grid::symmetric(1024, 10.0).unwrap();
        assert!((g.dx() - 20.0 / 1024.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_grids_are_rejected() {
        assert!(Grid::symmetric(0, 1.0).is_err());
        assert!(Grid::symmetric(1, 1.0).is_err());
        assert!(Grid::symmetric(16, 0.0).is_err());
        assert!(Grid::symmetric(16, -3.0).is_err());
        assert!(Grid::new(16, 1.0, 1.0).is_err());
        assert!(Grid::new(16, 2.0, -2.0).is_err());
    }

    #[test]
    fn symmetric_grid_has_no_origin_sample_and_mirrors_exactly() {
        let g = Grid::symmetric(64, 4.0).unwrap();
        for k in 0..g.len() {
            assert_ne!(g.x(k), 0.0);
            assert_eq!(g.x(k), -g.x(g.len() - 1 - k));
        }
    }

    #[test]
    fn offset_grid_reports_asymmetry() {
        let g = Grid::new(8, 0.0, 4.0).unwrap();
        assert!(!g.is_symmetric());
        assert!(g.contains(1.0));
        assert!(!g.contains(-0.5));
    }
}
