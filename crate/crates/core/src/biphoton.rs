//! Two-photon amplitudes with exchange symmetry, in dense or low-rank form.
//!
//! A [`BiphotonState`] stores the complex amplitude `B(x₁, x₂)` for detecting
//! one photon at `x₁` and one at `x₂`, with norm convention
//! `norm² = ΣΣ |B_jk|² dx²`. Two interchangeable representations live behind
//! the same interface:
//!
//! * **Dense** — the full n×n array. Exact for anything, O(n²); kept as the
//!   in-crate reference that the low-rank path is tested against.
//! * **Schmidt** — a short sum `B = Σ_r c_r · u_r(x₁) · v_r(x₂)`. The states
//!   of interest here have rank ≤ 2, which turns mask application into
//!   O(r·n) and lens transforms into O(r·n log n).
//!
//! Because two non-interacting photons traverse a linear device
//! independently, any single-photon map `U` acts on the pair as `U ⊗ U`:
//! dense states get `U` applied along each axis, Schmidt states get `U`
//! applied to every factor mode. Exchange symmetry (bosonic `B(x₁,x₂) =
//! B(x₂,x₁)`, fermionic antisymmetric) is preserved by construction.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field1D;
use crate::grid::Grid;
use crate::mask::MaskSamples;
use crate::optics::SinglePhotonOp;

/// Behavior of the amplitude under particle exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExchangeSymmetry {
    Bosonic,
    Fermionic,
}

impl ExchangeSymmetry {
    /// +1 for bosons, -1 for fermions.
    pub fn sign(self) -> f64 {
        match self {
            ExchangeSymmetry::Bosonic => 1.0,
            ExchangeSymmetry::Fermionic => -1.0,
        }
    }
}

/// One term of a Schmidt-form amplitude: `coeff · mode_a(x₁) · mode_b(x₂)`.
#[derive(Debug, Clone)]
pub struct SchmidtTerm {
    pub coeff: Complex64,
    pub mode_a: Field1D,
    pub mode_b: Field1D,
}

#[derive(Debug, Clone)]
enum Repr {
    Dense(Array2<Complex64>),
    Schmidt(Vec<SchmidtTerm>),
}

/// Two-photon complex amplitude on a shared grid.
#[derive(Debug, Clone)]
pub struct BiphotonState {
    grid: Grid,
    symmetry: ExchangeSymmetry,
    repr: Repr,
}

const MODE_NORM_TOL: f64 = 1e-9;
const OVERLAP_TOL: f64 = 1e-6;

impl BiphotonState {
    /// The two-path-entangled pair: both photons in a Gaussian mode at `x_a`
    /// or both in one at `x_b`, with relative phase `phi`:
    /// `B = (1/√2)[p_a(x₁)p_a(x₂) + e^{iφ} p_b(x₁)p_b(x₂)]`.
    ///
    /// The modes must be well separated (`|⟨p_a|p_b⟩| < 1e-6`), otherwise the
    /// stated coefficients would not normalize the state.
    pub fn path_entangled(grid: &Grid, x_a: f64, x_b: f64, waist: f64, phi: f64) -> Result<Self> {
        let p_a = Field1D::gaussian(grid, x_a, waist)?;
        let p_b = Field1D::gaussian(grid, x_b, waist)?;
        let overlap = p_a.inner(&p_b)?.norm();
        if overlap >= OVERLAP_TOL {
            return Err(Error::invalid(format!(
                "path modes overlap too strongly (|<a|b>| = {overlap:.3e}); \
                 separate the beams or narrow the waist"
            )));
        }
        let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let terms = vec![
            SchmidtTerm { coeff: c, mode_a: p_a.clone(), mode_b: p_a },
            SchmidtTerm {
                coeff: c * Complex64::from_polar(1.0, phi),
                mode_a: p_b.clone(),
                mode_b: p_b,
            },
        ];
        Ok(BiphotonState { grid: *grid, symmetry: ExchangeSymmetry::Bosonic, repr: Repr::Schmidt(terms) })
    }

    /// Both photons in the same normalized mode: `B = m(x₁)·m(x₂)`.
    pub fn product_pair(mode: &Field1D) -> Result<Self> {
        let norm = mode.norm_sqr();
        if (norm - 1.0).abs() > MODE_NORM_TOL {
            return Err(Error::invalid(format!(
                "product pair needs a normalized mode, norm² = {norm}"
            )));
        }
        let terms = vec![SchmidtTerm {
            coeff: Complex64::new(1.0, 0.0),
            mode_a: mode.clone(),
            mode_b: mode.clone(),
        }];
        Ok(BiphotonState {
            grid: *mode.grid(),
            symmetry: ExchangeSymmetry::Bosonic,
            repr: Repr::Schmidt(terms),
        })
    }

    /// An exchange-antisymmetric pair of orthogonal modes:
    /// `B = (1/√2)[a(x₁)b(x₂) − b(x₁)a(x₂)]`.
    pub fn fermion_pair(mode_a: &Field1D, mode_b: &Field1D) -> Result<Self> {
        for (name, m) in [("a", mode_a), ("b", mode_b)] {
            let norm = m.norm_sqr();
            if (norm - 1.0).abs() > MODE_NORM_TOL {
                return Err(Error::invalid(format!(
                    "fermion pair needs normalized modes, norm²({name}) = {norm}"
                )));
            }
        }
        let overlap = mode_a.inner(mode_b)?.norm();
        if overlap >= OVERLAP_TOL {
            return Err(Error::invalid(format!(
                "fermion modes must be orthogonal, |<a|b>| = {overlap:.3e}"
            )));
        }
        let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let terms = vec![
            SchmidtTerm { coeff: c, mode_a: mode_a.clone(), mode_b: mode_b.clone() },
            SchmidtTerm { coeff: -c, mode_a: mode_b.clone(), mode_b: mode_a.clone() },
        ];
        Ok(BiphotonState {
            grid: *mode_a.grid(),
            symmetry: ExchangeSymmetry::Fermionic,
            repr: Repr::Schmidt(terms),
        })
    }

    /// Build a state from explicit Schmidt terms `B = Σ c_r·u_r(x₁)·v_r(x₂)`.
    ///
    /// All modes must share one grid; the declared exchange symmetry is
    /// validated on the densified amplitude (to 1e-10 relative), so this is
    /// meant for constructing custom states at moderate grid sizes.
    pub fn from_schmidt(
        grid: &Grid,
        terms: Vec<SchmidtTerm>,
        symmetry: ExchangeSymmetry,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a Schmidt state needs at least one term"));
        }
        for t in &terms {
            if t.mode_a.grid() != grid || t.mode_b.grid() != grid {
                return Err(Error::invalid("all Schmidt modes must live on the state's grid"));
            }
        }
        let state = BiphotonState { grid: *grid, symmetry, repr: Repr::Schmidt(terms) };
        let defect = state.symmetry_defect();
        if defect > 1e-10 {
            return Err(Error::invalid(format!(
                "terms violate declared {symmetry:?} symmetry (relative defect {defect:.3e})"
            )));
        }
        Ok(state)
    }

    /// Wrap a dense amplitude, validating shape and exchange symmetry
    /// (to 1e-10 relative).
    pub fn from_dense(grid: &Grid, amp: Array2<Complex64>, symmetry: ExchangeSymmetry) -> Result<Self> {
        let n = grid.len();
        if amp.dim() != (n, n) {
            return Err(Error::invalid(format!(
                "dense amplitude is {:?}, grid needs {n}×{n}",
                amp.dim()
            )));
        }
        let scale = amp.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            let sign = symmetry.sign();
            let mut defect = 0.0f64;
            for j in 0..n {
                for k in j..n {
                    let d = (amp[[j, k]] - amp[[k, j]] * sign).norm();
                    defect = defect.max(d);
                }
            }
            if defect > 1e-10 * scale {
                return Err(Error::invalid(format!(
                    "amplitude violates declared {symmetry:?} symmetry \
                     (relative defect {:.3e})",
                    defect / scale
                )));
            }
        }
        Ok(BiphotonState { grid: *grid, symmetry, repr: Repr::Dense(amp) })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn symmetry(&self) -> ExchangeSymmetry {
        self.symmetry
    }

    /// Number of Schmidt terms, or `None` for the dense representation.
    pub fn schmidt_rank(&self) -> Option<usize> {
        match &self.repr {
            Repr::Dense(_) => None,
            Repr::Schmidt(terms) => Some(terms.len()),
        }
    }

    pub(crate) fn schmidt_terms(&self) -> Option<&[SchmidtTerm]> {
        match &self.repr {
            Repr::Dense(_) => None,
            Repr::Schmidt(terms) => Some(terms),
        }
    }

    pub(crate) fn dense_amp(&self) -> Option<&Array2<Complex64>> {
        match &self.repr {
            Repr::Dense(amp) => Some(amp),
            Repr::Schmidt(_) => None,
        }
    }

    /// The full n×n amplitude, densifying a Schmidt state if needed. The
    /// upper triangle is computed and the lower mirrored with the declared
    /// symmetry sign, so densified states satisfy their exchange symmetry
    /// bit-exactly.
    pub fn to_dense(&self) -> Array2<Complex64> {
        match &self.repr {
            Repr::Dense(amp) => amp.clone(),
            Repr::Schmidt(terms) => {
                let n = self.grid.len();
                let mut out = Array2::zeros((n, n));
                for t in terms {
                    for j in 0..n {
                        let left = t.coeff * t.mode_a.amp()[j];
                        for k in j..n {
                            out[[j, k]] += left * t.mode_b.amp()[k];
                        }
                    }
                }
                let sign = self.symmetry.sign();
                for j in 1..n {
                    for k in 0..j {
                        out[[j, k]] = out[[k, j]] * sign;
                    }
                }
                if self.symmetry == ExchangeSymmetry::Fermionic {
                    // antisymmetry pins the diagonal to exactly zero
                    for j in 0..n {
                        out[[j, j]] = Complex64::new(0.0, 0.0);
                    }
                }
                out
            }
        }
    }

    /// The same state converted to the dense representation.
    pub fn densified(&self) -> Self {
        BiphotonState {
            grid: self.grid,
            symmetry: self.symmetry,
            repr: Repr::Dense(self.to_dense()),
        }
    }

    /// `ΣΣ |B_jk|² dx²`.
    pub fn norm_sqr(&self) -> f64 {
        match &self.repr {
            Repr::Dense(amp) => {
                let dx = self.grid.dx();
                amp.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx * dx
            }
            Repr::Schmidt(terms) => {
                let mut total = 0.0;
                for t in terms {
                    for s in terms {
                        // <s|t> factorizes over the two coordinates
                        let ga = s.mode_a.inner(&t.mode_a).expect("same grid");
                        let gb = s.mode_b.inner(&t.mode_b).expect("same grid");
                        total += (t.coeff * s.coeff.conj() * ga * gb).re;
                    }
                }
                total
            }
        }
    }

    /// Plain densification without the symmetry-enforcing mirror; the
    /// honest witness for symmetry checks.
    fn to_dense_raw(&self) -> Array2<Complex64> {
        match &self.repr {
            Repr::Dense(amp) => amp.clone(),
            Repr::Schmidt(terms) => {
                let n = self.grid.len();
                let mut out = Array2::zeros((n, n));
                for t in terms {
                    for j in 0..n {
                        let left = t.coeff * t.mode_a.amp()[j];
                        for k in 0..n {
                            out[[j, k]] += left * t.mode_b.amp()[k];
                        }
                    }
                }
                out
            }
        }
    }

    /// Largest relative deviation from the declared exchange symmetry,
    /// measured on the densified amplitude (without symmetry enforcement).
    pub fn symmetry_defect(&self) -> f64 {
        let amp = self.to_dense_raw();
        let n = self.grid.len();
        let scale = amp.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let sign = self.symmetry.sign();
        let mut defect = 0.0f64;
        for j in 0..n {
            for k in j..n {
                defect = defect.max((amp[[j, k]] - amp[[k, j]] * sign).norm());
            }
        }
        defect / scale
    }

    /// Apply a single-photon linear map to both photons (Dense: along each
    /// axis; Schmidt: to every factor mode). The symmetry class is
    /// unchanged, and the norm is preserved whenever the map is unitary.
    pub fn apply_op(&self, op: &dyn SinglePhotonOp) -> Result<Self> {
        if op.input_grid() != &self.grid {
            return Err(Error::invalid(
                "single-photon op is defined on a different grid than the state",
            ));
        }
        let out_grid = *op.output_grid();
        let repr = match &self.repr {
            Repr::Schmidt(terms) => {
                let mut out = Vec::with_capacity(terms.len());
                for t in terms {
                    out.push(SchmidtTerm {
                        coeff: t.coeff,
                        mode_a: op.apply(&t.mode_a)?,
                        mode_b: op.apply(&t.mode_b)?,
                    });
                }
                Repr::Schmidt(out)
            }
            Repr::Dense(amp) => {
                let n = self.grid.len();
                let n_out = out_grid.len();
                // first coordinate: transform every column
                let mut half = Array2::zeros((n_out, n));
                for k in 0..n {
                    let col: Vec<Complex64> = (0..n).map(|j| amp[[j, k]]).collect();
                    let out = op.apply(&Field1D::new(self.grid, col)?)?;
                    for (j, v) in out.amp().iter().enumerate() {
                        half[[j, k]] = *v;
                    }
                }
                // second coordinate: transform every row
                let mut full = Array2::zeros((n_out, n_out));
                for j in 0..n_out {
                    let row: Vec<Complex64> = (0..n).map(|k| half[[j, k]]).collect();
                    let out = op.apply(&Field1D::new(self.grid, row)?)?;
                    for (k, v) in out.amp().iter().enumerate() {
                        full[[j, k]] = *v;
                    }
                }
                Repr::Dense(full)
            }
        };
        Ok(BiphotonState { grid: out_grid, symmetry: self.symmetry, repr })
    }

    /// Pointwise two-photon mask action `B'_{jk} = M_j · M_k · B_{jk}`.
    /// The induced two-photon mask is symmetric by construction, so the
    /// symmetry class is unchanged.
    pub fn apply_mask(&self, mask: &MaskSamples) -> Result<Self> {
        if mask.grid() != &self.grid {
            return Err(Error::invalid("mask was sampled on a different grid than the state"));
        }
        let m = mask.values();
        let repr = match &self.repr {
            Repr::Schmidt(terms) => Repr::Schmidt(
                terms
                    .iter()
                    .map(|t| SchmidtTerm {
                        coeff: t.coeff,
                        mode_a: t.mode_a.mul_samples(m),
                        mode_b: t.mode_b.mul_samples(m),
                    })
                    .collect(),
            ),
            Repr::Dense(amp) => {
                let n = self.grid.len();
                let mut out = amp.clone();
                for j in 0..n {
                    for k in 0..n {
                        out[[j, k]] *= m[j] * m[k];
                    }
                }
                Repr::Dense(out)
            }
        };
        Ok(BiphotonState { grid: self.grid, symmetry: self.symmetry, repr })
    }

    /// Single-photon intensity `I(x_j) = 2·Σ_k |B_jk|² dx` (two photons per
    /// pair, so `Σ_j I_j dx = 2·norm²`).
    pub fn intensity_marginal(&self) -> Vec<f64> {
        let n = self.grid.len();
        let dx = self.grid.dx();
        match &self.repr {
            Repr::Dense(amp) => (0..n)
                .map(|j| 2.0 * (0..n).map(|k| amp[[j, k]].norm_sqr()).sum::<f64>() * dx)
                .collect(),
            Repr::Schmidt(terms) => {
                let r = terms.len();
                // gram matrix over the x₂ factors
                let mut gram = vec![Complex64::new(0.0, 0.0); r * r];
                for (ti, t) in terms.iter().enumerate() {
                    for (si, s) in terms.iter().enumerate() {
                        gram[ti * r + si] = s.mode_b.inner(&t.mode_b).expect("same grid");
                    }
                }
                (0..n)
                    .map(|j| {
                        let mut acc = 0.0;
                        for (ti, t) in terms.iter().enumerate() {
                            for (si, s) in terms.iter().enumerate() {
                                acc += (t.coeff
                                    * s.coeff.conj()
                                    * t.mode_a.amp()[j]
                                    * s.mode_a.amp()[j].conj()
                                    * gram[ti * r + si])
                                    .re;
                            }
                        }
                        2.0 * acc
                    })
                    .collect()
            }
        }
    }

    /// Relabel both coordinates `x -> -x` by reversing sample order; on a
    /// symmetric grid this undoes the 4-f image inversion exactly.
    pub fn reversed(&self) -> Self {
        let repr = match &self.repr {
            Repr::Schmidt(terms) => Repr::Schmidt(
                terms
                    .iter()
                    .map(|t| SchmidtTerm {
                        coeff: t.coeff,
                        mode_a: t.mode_a.reversed(),
                        mode_b: t.mode_b.reversed(),
                    })
                    .collect(),
            ),
            Repr::Dense(amp) => {
                let n = self.grid.len();
                Repr::Dense(Array2::from_shape_fn((n, n), |(j, k)| {
                    amp[[n - 1 - j, n - 1 - k]]
                }))
            }
        };
        BiphotonState { grid: self.grid, symmetry: self.symmetry, repr }
    }
}
