//! Detector-binned intensity correlations.
//!
//! `Γ_{q,r}` is the probability of coincident detection in bins `q` and `r`,
//! the double integral of `|B(x₁, x₂)|²` over the two bins:
//!
//! ```text
//! Γ_{q,r} = Σ_{j∈bin q} Σ_{k∈bin r} |B_jk|² dx²
//! ```
//!
//! Bin edges snap inward to whole grid samples so that `Γ` is bit-exactly
//! reproducible; the snapped half-widths are recorded on the map. `Γ` is
//! computed once per unordered pair and mirrored, so the matrix is exactly
//! symmetric.

use ndarray::Array2;
use num_complex::Complex64;

use crate::biphoton::BiphotonState;
use crate::error::{Error, Result};
use crate::field::Field1D;
use crate::grid::Grid;

/// Uniformly spaced collection bins, indexed by integer site labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorArray {
    min_site: i64,
    max_site: i64,
    origin: f64,
    pitch: f64,
    half_width: f64,
}

impl DetectorArray {
    /// Bins at `origin + s·pitch` for `s` in `min_site..=max_site`, each
    /// collecting over `±half_width`. Bins must not overlap (`2w ≤ pitch`).
    pub fn new(min_site: i64, max_site: i64, origin: f64, pitch: f64, half_width: f64) -> Result<Self> {
        if min_site > max_site {
            return Err(Error::invalid(format!(
                "empty detector range {min_site}..={max_site}"
            )));
        }
        if !(pitch > 0.0) {
            return Err(Error::invalid(format!("detector pitch must be positive, got {pitch}")));
        }
        if !(half_width > 0.0) {
            return Err(Error::invalid(format!(
                "detector half-width must be positive, got {half_width}"
            )));
        }
        if 2.0 * half_width > pitch * (1.0 + 1e-12) {
            return Err(Error::invalid(format!(
                "bins of width {} overlap at pitch {pitch}",
                2.0 * half_width
            )));
        }
        Ok(DetectorArray { min_site, max_site, origin, pitch, half_width })
    }

    /// Sites `-n_max..=n_max` around `origin`.
    pub fn lattice(origin: f64, pitch: f64, n_max: u32, half_width: f64) -> Result<Self> {
        DetectorArray::new(-(n_max as i64), n_max as i64, origin, pitch, half_width)
    }

    pub fn len(&self) -> usize {
        (self.max_site - self.min_site + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> {
        self.min_site..=self.max_site
    }

    pub fn min_site(&self) -> i64 {
        self.min_site
    }

    pub fn max_site(&self) -> i64 {
        self.max_site
    }

    pub fn center(&self, site: i64) -> f64 {
        self.origin + site as f64 * self.pitch
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    fn index(&self, site: i64) -> Option<usize> {
        if site < self.min_site || site > self.max_site {
            None
        } else {
            Some((site - self.min_site) as usize)
        }
    }

    /// Inclusive sample range of each bin on `grid`, snapped inward.
    fn sample_ranges(&self, grid: &Grid) -> Result<Vec<(usize, usize)>> {
        let dx = grid.dx();
        let slack = 1e-9 * dx;
        self.sites()
            .map(|s| {
                let c = self.center(s);
                let (lo, hi) = (c - self.half_width, c + self.half_width);
                if lo < grid.x_min() - slack || hi > grid.x_max() + slack {
                    return Err(Error::invalid(format!(
                        "detector bin {s} at [{lo}, {hi}] falls outside the grid \
                         [{}, {}]",
                        grid.x_min(),
                        grid.x_max()
                    )));
                }
                // sample k sits at x_min + (k + 1/2) dx
                let j_lo = ((lo - grid.x_min()) / dx - 0.5 - 1e-9).ceil().max(0.0) as usize;
                let j_hi = (((hi - grid.x_min()) / dx - 0.5 + 1e-9).floor() as isize)
                    .min(grid.len() as isize - 1);
                if j_hi < j_lo as isize {
                    return Err(Error::invalid(format!(
                        "detector bin {s} is narrower than one grid sample"
                    )));
                }
                Ok((j_lo, j_hi as usize))
            })
            .collect()
    }
}

/// Binned coincidence probabilities `Γ` with the geometry that produced them.
#[derive(Debug, Clone)]
pub struct CorrelationMap {
    detectors: DetectorArray,
    gamma: Array2<f64>,
    snapped_half_widths: Vec<f64>,
}

impl CorrelationMap {
    pub fn detectors(&self) -> &DetectorArray {
        &self.detectors
    }

    /// Raw probabilities, row/column order matching `detectors().sites()`.
    pub fn gamma(&self) -> &Array2<f64> {
        &self.gamma
    }

    /// Actual half-width of each bin after snapping to whole samples.
    pub fn snapped_half_widths(&self) -> &[f64] {
        &self.snapped_half_widths
    }

    pub fn value(&self, site_q: i64, site_r: i64) -> Option<f64> {
        let q = self.detectors.index(site_q)?;
        let r = self.detectors.index(site_r)?;
        Some(self.gamma[[q, r]])
    }

    /// `ΣΓ`: probability that both photons land in some bin.
    pub fn total(&self) -> f64 {
        self.gamma.sum()
    }

    /// `Σ_q Γ_qq / ΣΓ`: how much coincidence mass sits on the diagonal
    /// (bunching → large, anti-bunching → small).
    pub fn diagonal_fraction(&self) -> f64 {
        let diag: f64 = (0..self.detectors.len()).map(|i| self.gamma[[i, i]]).sum();
        diag / self.total()
    }

    /// `Γ` rescaled to unit total, for comparisons against the lattice
    /// oracle's normalization.
    pub fn renormalized(&self) -> Array2<f64> {
        &self.gamma / self.total()
    }
}

impl DetectorArray {
    /// Sum a sampled density over each bin: `Σ_{j∈bin} values_j · dx`.
    pub fn bin_sums(&self, grid: &Grid, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "density has {} samples but grid has {}",
                values.len(),
                grid.len()
            )));
        }
        let ranges = self.sample_ranges(grid)?;
        let dx = grid.dx();
        Ok(ranges
            .iter()
            .map(|&(lo, hi)| values[lo..=hi].iter().sum::<f64>() * dx)
            .collect())
    }
}

/// Bin a single-photon field: `γ_q = Σ_{j∈bin q} |f_j|² dx`.
pub fn bin_probabilities(field: &Field1D, det: &DetectorArray) -> Result<Vec<f64>> {
    det.bin_sums(field.grid(), &field.intensity())
}

/// Compute the coincidence map of `state` over `det`.
pub fn correlation_map(state: &BiphotonState, det: &DetectorArray) -> Result<CorrelationMap> {
    let grid = state.grid();
    let ranges = det.sample_ranges(grid)?;
    let dx = grid.dx();
    let m = det.len();
    let snapped_half_widths =
        ranges.iter().map(|&(lo, hi)| 0.5 * (hi - lo + 1) as f64 * dx).collect();

    let mut gamma = Array2::zeros((m, m));
    if let Some(terms) = state.schmidt_terms() {
        // Γ_qr = Σ_{t,s} c_t c̄_s · P^q_{ts} · Q^r_{ts}, with per-bin overlap
        // matrices P (x₁ factors) and Q (x₂ factors).
        let r = terms.len();
        let overlap = |bin: &(usize, usize), left: &[Complex64], right: &[Complex64]| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in bin.0..=bin.1 {
                acc += left[j] * right[j].conj();
            }
            acc * dx
        };
        let mut p = vec![Complex64::new(0.0, 0.0); m * r * r];
        let mut q = vec![Complex64::new(0.0, 0.0); m * r * r];
        for (b, range) in ranges.iter().enumerate() {
            for (ti, t) in terms.iter().enumerate() {
                for (si, s) in terms.iter().enumerate() {
                    p[(b * r + ti) * r + si] = overlap(range, t.mode_a.amp(), s.mode_a.amp());
                    q[(b * r + ti) * r + si] = overlap(range, t.mode_b.amp(), s.mode_b.amp());
                }
            }
        }
        for qi in 0..m {
            for ri in qi..m {
                let mut acc = 0.0;
                for (ti, t) in terms.iter().enumerate() {
                    for (si, s) in terms.iter().enumerate() {
                        acc += (t.coeff
                            * s.coeff.conj()
                            * p[(qi * r + ti) * r + si]
                            * q[(ri * r + ti) * r + si])
                            .re;
                    }
                }
                let v = acc.max(0.0);
                gamma[[qi, ri]] = v;
                gamma[[ri, qi]] = v;
            }
        }
    } else {
        let amp = state.dense_amp().expect("state is dense");
        for qi in 0..m {
            for ri in qi..m {
                let (alo, ahi) = ranges[qi];
                let (blo, bhi) = ranges[ri];
                let mut acc = 0.0;
                for j in alo..=ahi {
                    for k in blo..=bhi {
                        acc += amp[[j, k]].norm_sqr();
                    }
                }
                let v = acc * dx * dx;
                gamma[[qi, ri]] = v;
                gamma[[ri, qi]] = v;
            }
        }
    }

    Ok(CorrelationMap { detectors: det.clone(), gamma, snapped_half_widths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biphoton::BiphotonState;

    fn grid() -> Grid {
        Grid::symmetric(512, 8.0).unwrap()
    }

    /// Brute-force reference: scan every sample pair and test bin membership
    /// by the defining inequalities.
    fn naive_gamma(state: &BiphotonState, det: &DetectorArray) -> Array2<f64> {
        let grid = state.grid();
        let amp = state.to_dense();
        let dx = grid.dx();
        let m = det.len();
        let mut out = Array2::zeros((m, m));
        let member = |x: f64, site: i64| {
            let c = det.center(site);
            // snapped-inward membership: sample centers inside ±w
            (x - c).abs() <= det.half_width() + 1e-9 * dx
        };
        for (qi, qs) in det.sites().enumerate() {
            for (ri, rs) in det.sites().enumerate() {
                let mut acc = 0.0;
                for j in 0..grid.len() {
                    if !member(grid.x(j), qs) {
                        continue;
                    }
                    for k in 0..grid.len() {
                        if member(grid.x(k), rs) {
                            acc += amp[[j, k]].norm_sqr();
                        }
                    }
                }
                out[[qi, ri]] = acc * dx * dx;
            }
        }
        out
    }

    #[test]
    fn overlapping_bins_are_rejected() {
        assert!(DetectorArray::lattice(0.0, 0.5, 3, 0.3).is_err());
        assert!(DetectorArray::lattice(0.0, 0.5, 3, 0.25).is_ok());
    }

    #[test]
    fn bins_outside_grid_are_rejected() {
        let g = grid();
        let s = BiphotonState::path_entangled(&g, -0.5, 0.5, 0.125, 0.0).unwrap();
        let det = DetectorArray::lattice(0.0, 1.0, 40, 0.25).unwrap();
        assert!(matches!(correlation_map(&s, &det), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn input_state_correlates_only_on_the_diagonal() {
        // the reference pattern: two spots on the main diagonal
        let g = grid();
        let (x_a, x_b, waist) = (-0.5, 0.5, 0.125);
        let s = BiphotonState::path_entangled(&g, x_a, x_b, waist, 0.0).unwrap();
        let det = DetectorArray::new(0, 1, x_a, x_b - x_a, 0.25).unwrap();
        let map = correlation_map(&s, &det).unwrap();

        let brute = naive_gamma(&s, &det);
        for q in 0..2 {
            for r in 0..2 {
                assert!((map.gamma()[[q, r]] - brute[[q, r]]).abs() < 1e-12);
            }
        }
        // each diagonal spot carries half the pairs, up to the fiber capture
        assert!((map.value(0, 0).unwrap() - 0.5).abs() < 1e-3);
        assert!((map.value(1, 1).unwrap() - 0.5).abs() < 1e-3);
        assert!(map.value(0, 1).unwrap() < 1e-12);
        assert!(map.total() <= 1.0 + 1e-12);
    }

    #[test]
    fn dense_route_matches_schmidt_route() {
        let g = Grid::symmetric(256, 8.0).unwrap();
        let s = BiphotonState::path_entangled(&g, -1.0, 1.0, 0.25, 1.3).unwrap();
        let det = DetectorArray::lattice(-1.0, 2.0, 3, 0.5).unwrap();
        let fast = correlation_map(&s, &det).unwrap();
        let dense = correlation_map(&s.densified(), &det).unwrap();
        for q in 0..det.len() {
            for r in 0..det.len() {
                assert!((fast.gamma()[[q, r]] - dense.gamma()[[q, r]]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fermion_diagonal_vanishes_as_bins_narrow() {
        let g = grid();
        let a = Field1D::gaussian(&g, -0.5, 0.15).unwrap();
        let b = Field1D::gaussian(&g, 0.5, 0.15).unwrap();
        let s = BiphotonState::fermion_pair(&a, &b).unwrap();
        let mut last = f64::INFINITY;
        for w in [0.25, 0.125, 0.0625] {
            let det = DetectorArray::new(0, 1, -0.5, 1.0, w).unwrap();
            let map = correlation_map(&s, &det).unwrap();
            let diag = map.value(0, 0).unwrap() + map.value(1, 1).unwrap();
            assert!(diag < last);
            last = diag;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn gamma_is_symmetric_and_nonnegative() {
        let g = grid();
        let s = BiphotonState::path_entangled(&g, -0.5, 0.5, 0.125, -2.0).unwrap();
        let det = DetectorArray::lattice(-0.5, 1.0, 6, 0.25).unwrap();
        let map = correlation_map(&s, &det).unwrap();
        for q in 0..det.len() {
            for r in 0..det.len() {
                assert_eq!(map.gamma()[[q, r]], map.gamma()[[r, q]]);
                assert!(map.gamma()[[q, r]] >= 0.0);
            }
        }
        assert!(map.total() <= s.norm_sqr() + 1e-12);
    }

    #[test]
    fn product_states_factorize() {
        let g = grid();
        let mode = Field1D::gaussian(&g, 0.1, 0.4).unwrap();
        let s = BiphotonState::product_pair(&mode).unwrap();
        let det = DetectorArray::lattice(0.0, 1.0, 5, 0.25).unwrap();
        let map = correlation_map(&s, &det).unwrap();
        let singles = bin_probabilities(&mode, &det).unwrap();
        for (qi, gq) in singles.iter().enumerate() {
            for (ri, gr) in singles.iter().enumerate() {
                assert!((map.gamma()[[qi, ri]] - gq * gr).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn touching_bins_tile_the_support() {
        // bins of full pitch width recover the whole norm
        let g = grid();
        let s = BiphotonState::path_entangled(&g, -0.5, 0.5, 0.125, 0.4).unwrap();
        let det = DetectorArray::lattice(0.0, 1.0, 7, 0.5).unwrap();
        let map = correlation_map(&s, &det).unwrap();
        assert!((map.total() - s.norm_sqr()).abs() < 1e-6);
    }

    #[test]
    fn snapped_widths_are_recorded() {
        let g = grid(); // dx = 0.03125
        let s = BiphotonState::path_entangled(&g, -0.5, 0.5, 0.125, 0.0).unwrap();
        let det = DetectorArray::lattice(-0.5, 1.0, 2, 0.25).unwrap();
        let map = correlation_map(&s, &det).unwrap();
        for w in map.snapped_half_widths() {
            assert!((w - 0.25).abs() < g.dx());
        }
    }
}
