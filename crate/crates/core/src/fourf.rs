//! The 4-f filter: lens → Fourier-plane mask → lens.
//!
//! The input plane is Fourier-transformed onto the conjugate grid, multiplied
//! by the sampled mask, and transformed back. A bare 4-f system images
//! `in(x)` to `out(-x)`; the pipeline relabels the output axis (sample-order
//! reversal on the symmetric grid) so that the identity mask is the identity
//! map and output maps are directly comparable to inputs.
//!
//! Lattice registration: a periodic Fourier-plane mask of frequency `ν`
//! couples an input mode to displaced copies of itself at multiples of
//! `ν·λf`. Choosing `ν = pitch/λf` (see [`lattice_frequency`]) makes that
//! displacement equal the detector pitch, so discrete input modes stay on a
//! discrete output lattice.

use crate::biphoton::BiphotonState;
use crate::error::{Error, Result};
use crate::field::Field1D;
use crate::mask::{sample_mask, MaskSpec};
use crate::optics::{conjugate_grid, lens_fourier, LensOp, OpticsParams};

/// Mask frequency whose Fourier-plane period is conjugate to `pitch`:
/// `ν = pitch / λf`.
pub fn lattice_frequency(optics: OpticsParams, pitch: f64) -> f64 {
    pitch / optics.lambda_f()
}

fn require_symmetric(grid: &crate::grid::Grid) -> Result<()> {
    if !grid.is_symmetric() {
        return Err(Error::invalid(
            "the 4-f pipeline needs a grid symmetric about the optical axis \
             (the inversion relabel reverses sample order)",
        ));
    }
    Ok(())
}

/// Push a single-photon field through the 4-f filter.
pub fn run_4f_single(field: &Field1D, mask: &MaskSpec, optics: OpticsParams) -> Result<Field1D> {
    let grid = field.grid();
    require_symmetric(grid)?;
    let fourier = conjugate_grid(grid, optics);
    let m = sample_mask(mask, &fourier)?;
    let at_mask = lens_fourier(field, optics, &fourier)?;
    let filtered = at_mask.mul_samples(m.values());
    let out = lens_fourier(&filtered, optics, grid)?;
    Ok(out.reversed())
}

/// Push a two-photon state through the 4-f filter. Exchange symmetry is
/// preserved; for phase-only masks so is the norm.
pub fn run_4f_biphoton(
    state: &BiphotonState,
    mask: &MaskSpec,
    optics: OpticsParams,
) -> Result<BiphotonState> {
    let grid = state.grid();
    require_symmetric(grid)?;
    let fourier = conjugate_grid(grid, optics);
    let m = sample_mask(mask, &fourier)?;
    let lens_in = LensOp::between(*grid, fourier, optics)?;
    let lens_out = LensOp::between(fourier, *grid, optics)?;
    let out = state.apply_op(&lens_in)?.apply_mask(&m)?.apply_op(&lens_out)?;
    Ok(out.reversed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biphoton::{BiphotonState, ExchangeSymmetry};
    use crate::detector::{bin_probabilities, correlation_map, DetectorArray};
    use crate::grid::Grid;
    use crate::lattice::walk_coefficients;

    const PI: f64 = std::f64::consts::PI;

    /// Shared geometry: pitch d, span 32·d, beams at ∓d/2, registered mask.
    struct Bench {
        grid: Grid,
        optics: OpticsParams,
        d: f64,
        waist: f64,
    }

    impl Bench {
        fn new(n: usize) -> Self {
            let d = 0.5;
            let grid = Grid::symmetric(n, 16.0 * d).unwrap();
            let optics = OpticsParams::new(808e-6, 100.0).unwrap();
            Bench { grid, optics, d, waist: d / 8.0 }
        }

        fn sinusoidal(&self, amplitude: f64) -> MaskSpec {
            MaskSpec::Sinusoidal {
                amplitude,
                frequency: lattice_frequency(self.optics, self.d),
                origin: 0.0,
            }
        }
    }

    fn max_field_diff(a: &Field1D, b: &Field1D) -> f64 {
        a.amp().iter().zip(b.amp()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_mask_is_the_identity_map() {
        let b = Bench::new(1024);
        let f = Field1D::gaussian(&b.grid, 0.75, b.waist).unwrap();
        let out = run_4f_single(&f, &b.sinusoidal(0.0), b.optics).unwrap();
        assert!(max_field_diff(&out, &f) < 1e-9);
    }

    #[test]
    fn phase_masks_preserve_the_norm() {
        let b = Bench::new(1024);
        let f = Field1D::gaussian(&b.grid, -0.25, b.waist).unwrap();
        let out = run_4f_single(&f, &b.sinusoidal(0.86 * PI), b.optics).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_beam_walk_matches_bessel_weights() {
        let b = Bench::new(2048);
        let a_p = 0.86 * PI;
        let f = Field1D::gaussian(&b.grid, 0.0, b.waist).unwrap();
        let out = run_4f_single(&f, &b.sinusoidal(a_p), b.optics).unwrap();
        let det = DetectorArray::lattice(0.0, b.d, 12, b.d / 4.0).unwrap();
        let binned = bin_probabilities(&out, &det).unwrap();
        let total: f64 = binned.iter().sum();
        let walk = walk_coefficients(a_p, 12).unwrap();
        for (site, engine) in det.sites().zip(&binned) {
            let oracle = walk.amp(site).norm_sqr();
            if oracle > 1e-3 {
                let rel = (engine / total - oracle).abs() / oracle;
                assert!(rel < 0.02, "site {site}: engine {engine}, oracle {oracle}");
            }
        }
    }

    #[test]
    fn biphoton_identity_mask_reproduces_input_correlations() {
        let b = Bench::new(1024);
        let s =
            BiphotonState::path_entangled(&b.grid, -b.d / 2.0, b.d / 2.0, b.waist, 0.9).unwrap();
        let out = run_4f_biphoton(&s, &b.sinusoidal(0.0), b.optics).unwrap();
        let det = DetectorArray::lattice(-b.d / 2.0, b.d, 5, b.d / 4.0).unwrap();
        let before = correlation_map(&s, &det).unwrap();
        let after = correlation_map(&out, &det).unwrap();
        for q in 0..det.len() {
            for r in 0..det.len() {
                assert!((before.gamma()[[q, r]] - after.gamma()[[q, r]]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn product_input_factorizes_through_the_pipeline() {
        let b = Bench::new(1024);
        let mode = Field1D::gaussian(&b.grid, 0.0, b.waist).unwrap();
        let mask = b.sinusoidal(0.3 * PI);
        let pair = BiphotonState::product_pair(&mode).unwrap();
        let via_pair = run_4f_biphoton(&pair, &mask, b.optics).unwrap();
        let via_single =
            BiphotonState::product_pair(&run_4f_single(&mode, &mask, b.optics).unwrap()).unwrap();
        let lhs = via_pair.to_dense();
        let rhs = via_single.to_dense();
        let scale = rhs.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let diff = lhs
            .iter()
            .zip(rhs.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-10 * scale.max(1.0));
    }

    #[test]
    fn symmetry_class_survives_phase_masks() {
        let b = Bench::new(1024);
        let mask = b.sinusoidal(0.86 * PI);
        let boson =
            BiphotonState::path_entangled(&b.grid, -b.d / 2.0, b.d / 2.0, b.waist, 1.2).unwrap();
        let out = run_4f_biphoton(&boson, &mask, b.optics).unwrap();
        assert_eq!(out.symmetry(), ExchangeSymmetry::Bosonic);
        assert!(out.symmetry_defect() < 1e-10);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-9);

        let a = Field1D::gaussian(&b.grid, -b.d / 2.0, b.waist).unwrap();
        let bm = Field1D::gaussian(&b.grid, b.d / 2.0, b.waist).unwrap();
        let fermion = BiphotonState::fermion_pair(&a, &bm).unwrap();
        let out = run_4f_biphoton(&fermion, &mask, b.optics).unwrap();
        assert_eq!(out.symmetry(), ExchangeSymmetry::Fermionic);
        assert!(out.symmetry_defect() < 1e-10);
    }

    #[test]
    fn fourier_aperture_separates_statistics() {
        let b = Bench::new(2048);
        let a = Field1D::gaussian(&b.grid, -b.d / 2.0, b.waist).unwrap();
        let bm = Field1D::gaussian(&b.grid, b.d / 2.0, b.waist).unwrap();
        let fermion = BiphotonState::fermion_pair(&a, &bm).unwrap();
        let mode = Field1D::gaussian(&b.grid, 0.0, b.waist).unwrap();
        let boson = BiphotonState::product_pair(&mode).unwrap();

        let mut previous = f64::INFINITY;
        for width in [b.d / 2.0, b.d / 4.0, b.d / 8.0] {
            let mask = MaskSpec::Aperture { center: 0.0, width };
            let t_f = run_4f_biphoton(&fermion, &mask, b.optics).unwrap().norm_sqr();
            let t_b = run_4f_biphoton(&boson, &mask, b.optics).unwrap().norm_sqr();
            assert!(t_f < previous, "fermion transmission must fall with width");
            assert!(t_b > 0.0);
            assert!(t_f < t_b, "the aperture favors bosons");
            previous = t_f;
        }
    }
}
