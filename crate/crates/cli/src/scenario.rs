//! Scenario runners: build the optical system from a [`ScenarioConfig`],
//! run it, compare against the lattice oracle, and write artifacts.
//!
//! Every run is deterministic — identical configs produce byte-identical
//! CSV/JSON/PGM outputs — and every summary embeds the config echo plus the
//! engine/oracle deviation metrics, so downstream checks can work from the
//! artifacts alone.

use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use biphoton_fourier::{
    bin_probabilities, conjugate_grid, correlation_map, lattice_frequency, oracle_correlation,
    oracle_with_extra_phase, run_4f_biphoton, run_4f_single, walk_coefficients, BiphotonState,
    CellPhase, DetectorArray, Field1D, Grid, MaskSpec, OpticsParams,
};

use crate::config::{CustomInput, ScenarioConfig, ScenarioKind};
use crate::emit::{emit_heatmap, write_json, write_matrix_csv, write_table_csv};
use crate::error::RunError;

/// Everything a scenario run reports, echoed config included.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub scenario: String,
    pub config: ScenarioConfig,
    pub results: ScenarioResults,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioResults {
    IntensitySweep(IntensitySweepReport),
    CorrelationMap(CorrelationReport),
    ZernikeRetrieval(ZernikeReport),
    FermionAperture(FermionReport),
    Custom(CustomReport),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntensitySweepReport {
    pub sites: Vec<i64>,
    pub rows: Vec<IntensityRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntensityRow {
    pub phase_amplitude: f64,
    /// Binned single-beam output, renormalized over the site window.
    pub single_engine: Vec<f64>,
    /// `J_s(A_p)²`, renormalized over the window.
    pub single_oracle: Vec<f64>,
    /// Binned per-photon marginal of the two-beam entangled input.
    pub pair_engine: Vec<f64>,
    pub pair_oracle: Vec<f64>,
    /// Worst relative deviation on sites where the oracle exceeds 1e-3.
    pub max_rel_dev_single: f64,
    pub participation_engine: f64,
    pub participation_oracle: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub sites: Vec<i64>,
    pub rows: Vec<CorrelationRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub phi: f64,
    /// Output norm² (1 for phase-only masks).
    pub norm_out: f64,
    /// Raw ΣΓ collected by the detector bins.
    pub gamma_total: f64,
    pub diag_fraction_engine: f64,
    pub diag_fraction_oracle: f64,
    /// Worst relative deviation on bins where the oracle exceeds 1e-3,
    /// engine renormalized to ΣΓ = 1.
    pub max_rel_dev: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZernikeReport {
    pub sites: Vec<i64>,
    /// The compared phases are ±phi_magnitude.
    pub phi_magnitude: f64,
    /// Total-variation distance ½Σ|Γ⁺-Γ⁻| with the plain sinusoidal mask.
    pub d_plain_engine: f64,
    /// Same with the quarter-cell filter composed on top.
    pub d_zernike_engine: f64,
    pub d_plain_oracle: f64,
    pub d_zernike_oracle: f64,
    /// `Σ|I_plain - I_zernike| dx / (2·norm²)` at +φ and -φ.
    pub marginal_l1_fraction_plus: f64,
    pub marginal_l1_fraction_minus: f64,
    /// Engine↔oracle deviation metrics for both mask stacks (worst of ±φ).
    pub max_rel_dev_plain: f64,
    pub max_rel_dev_zernike: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FermionReport {
    pub rows: Vec<FermionRow>,
    /// Whether fermion transmission fell strictly along the width list.
    pub fermion_monotone_decreasing: bool,
    /// fermion/boson transmission ratio at the last (narrowest) width.
    pub final_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FermionRow {
    pub width: f64,
    pub boson_norm_sqr: f64,
    pub fermion_norm_sqr: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CustomReport {
    pub input: CustomInput,
    pub norm_out: f64,
    pub gamma_total: Option<f64>,
    pub diag_fraction: Option<f64>,
}

struct Bench {
    grid: Grid,
    optics: OpticsParams,
    frequency: f64,
}

impl Bench {
    fn new(c: &ScenarioConfig) -> Result<Self, RunError> {
        let grid = Grid::symmetric(c.samples, c.half_extent)?;
        let optics = OpticsParams::new(c.lambda, c.focal_length)?;
        let frequency = lattice_frequency(optics, c.separation);
        Ok(Bench { grid, optics, frequency })
    }

    fn sinusoidal(&self, c: &ScenarioConfig, amplitude: f64) -> MaskSpec {
        MaskSpec::Sinusoidal { amplitude, frequency: self.frequency, origin: c.mask_origin }
    }

    fn zernike_composite(&self, c: &ScenarioConfig) -> MaskSpec {
        MaskSpec::Composite(vec![
            self.sinusoidal(c, c.phase_amplitude),
            MaskSpec::ZernikeQuarter {
                delta: c.zernike_delta,
                period: 1.0 / self.frequency,
                origin: c.mask_origin,
            },
        ])
    }

    /// Detector lattice registered to the two-beam input (site 0 at -d/2).
    fn pair_detectors(&self, c: &ScenarioConfig) -> Result<DetectorArray, RunError> {
        Ok(DetectorArray::lattice(
            -c.separation / 2.0,
            c.separation,
            c.site_range,
            c.fiber_half_width,
        )?)
    }

    /// Detector lattice centered on a single beam at the origin.
    fn single_detectors(&self, c: &ScenarioConfig) -> Result<DetectorArray, RunError> {
        Ok(DetectorArray::lattice(0.0, c.separation, c.site_range, c.fiber_half_width)?)
    }

    fn entangled(&self, c: &ScenarioConfig, phi: f64) -> Result<BiphotonState, RunError> {
        Ok(BiphotonState::path_entangled(
            &self.grid,
            -c.separation / 2.0,
            c.separation / 2.0,
            c.waist,
            phi,
        )?)
    }
}

fn normalized(values: &[f64]) -> Vec<f64> {
    let total: f64 = values.iter().sum();
    values.iter().map(|v| v / total).collect()
}

fn participation(probabilities: &[f64]) -> f64 {
    let total: f64 = probabilities.iter().sum();
    let sq: f64 = probabilities.iter().map(|p| p * p).sum();
    total * total / sq
}

/// Worst relative deviation over entries where the oracle exceeds `floor`.
fn max_rel_dev(engine: &Array2<f64>, oracle: &Array2<f64>, floor: f64) -> f64 {
    engine
        .iter()
        .zip(oracle.iter())
        .filter(|(_, o)| **o > floor)
        .map(|(e, o)| (e - o).abs() / o)
        .fold(0.0, f64::max)
}

fn max_rel_dev_slice(engine: &[f64], oracle: &[f64], floor: f64) -> f64 {
    engine
        .iter()
        .zip(oracle.iter())
        .filter(|(_, o)| **o > floor)
        .map(|(e, o)| (e - o).abs() / o)
        .fold(0.0, f64::max)
}

/// `½Σ|Γ₁-Γ₂|` for two equally shaped matrices.
fn total_variation(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    0.5 * a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Run a scenario, write its artifacts under `config.out_dir`, and return
/// the summary (which `summary.json` mirrors when JSON emission is on).
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioSummary, RunError> {
    fs::create_dir_all(&config.out_dir)?;
    let results = match config.scenario {
        ScenarioKind::IntensitySweep => intensity_sweep(config)?,
        ScenarioKind::CorrelationMap => correlation_scenario(config)?,
        ScenarioKind::ZernikeRetrieval => zernike_scenario(config)?,
        ScenarioKind::FermionAperture => fermion_scenario(config)?,
        ScenarioKind::Custom => custom_scenario(config)?,
    };
    let summary = ScenarioSummary {
        scenario: config.scenario.name().to_string(),
        config: config.clone(),
        results,
    };
    if config.emit.json {
        write_json(&config.out_dir.join("summary.json"), &summary)?;
    }
    Ok(summary)
}

fn intensity_sweep(c: &ScenarioConfig) -> Result<ScenarioResults, RunError> {
    let bench = Bench::new(c)?;
    let n_max = c.site_range as usize;
    let det_single = bench.single_detectors(c)?;
    let det_pair = bench.pair_detectors(c)?;
    let sites: Vec<i64> = det_single.sites().collect();
    let beam = Field1D::gaussian(&bench.grid, 0.0, c.waist)?;
    let pair_phi = c.phi_list[0];

    let mut rows = Vec::new();
    let mut sweep_matrix = Array2::zeros((c.phase_amplitude_list.len(), sites.len()));
    for (idx, &a_p) in c.phase_amplitude_list.iter().enumerate() {
        let mask = bench.sinusoidal(c, a_p);

        // single beam through the filter vs the Bessel walk
        let out_single = run_4f_single(&beam, &mask, bench.optics)?;
        let single_engine = normalized(&bin_probabilities(&out_single, &det_single)?);
        let walk = walk_coefficients(a_p, n_max)?;
        let single_oracle = normalized(&walk.probabilities());

        // two-beam entangled input; its marginal is φ-independent here
        let pair = bench.entangled(c, pair_phi)?;
        let out_pair = run_4f_biphoton(&pair, &mask, bench.optics)?;
        let marginal = out_pair.intensity_marginal();
        let pair_engine = normalized(&det_pair.bin_sums(&bench.grid, &marginal)?);
        let pair_oracle = normalized(
            &sites
                .iter()
                .map(|&q| {
                    0.5 * (walk.amp(q).norm_sqr() + walk.amp(q - 1).norm_sqr())
                })
                .collect::<Vec<_>>(),
        );

        for (k, v) in single_engine.iter().enumerate() {
            sweep_matrix[[idx, k]] = *v;
        }
        if c.emit.csv {
            let rows_csv: Vec<(String, Vec<f64>)> = sites
                .iter()
                .enumerate()
                .map(|(k, site)| {
                    (
                        site.to_string(),
                        vec![single_engine[k], single_oracle[k], pair_engine[k], pair_oracle[k]],
                    )
                })
                .collect();
            write_table_csv(
                &c.out_dir.join(format!("intensity_ap{idx:02}.csv")),
                &["site", "single_engine", "single_oracle", "pair_engine", "pair_oracle"],
                &rows_csv,
            )?;
        }

        rows.push(IntensityRow {
            phase_amplitude: a_p,
            max_rel_dev_single: max_rel_dev_slice(&single_engine, &single_oracle, 1e-3),
            participation_engine: participation(&single_engine),
            participation_oracle: walk.participation_number(),
            single_engine,
            single_oracle,
            pair_engine,
            pair_oracle,
        });
    }
    if c.emit.pgm {
        emit_heatmap(&sweep_matrix, &c.out_dir.join("intensity_sweep.pgm"))?;
    }
    Ok(ScenarioResults::IntensitySweep(IntensitySweepReport { sites, rows }))
}

fn correlation_scenario(c: &ScenarioConfig) -> Result<ScenarioResults, RunError> {
    let bench = Bench::new(c)?;
    let det = bench.pair_detectors(c)?;
    let sites: Vec<i64> = det.sites().collect();
    let mask = bench.sinusoidal(c, c.phase_amplitude);
    let n_max = c.site_range as usize;

    let mut rows = Vec::new();
    for (idx, &phi) in c.phi_list.iter().enumerate() {
        let state = bench.entangled(c, phi)?;
        let out = run_4f_biphoton(&state, &mask, bench.optics)?;
        let map = correlation_map(&out, &det)?;
        let engine = map.renormalized();
        let oracle = oracle_correlation(phi, c.phase_amplitude, 0, 1, n_max)?;

        if c.emit.csv {
            write_matrix_csv(&c.out_dir.join(format!("gamma_phi{idx:02}.csv")), &sites, map.gamma())?;
            write_matrix_csv(
                &c.out_dir.join(format!("oracle_phi{idx:02}.csv")),
                &sites,
                oracle.gamma(),
            )?;
        }
        if c.emit.pgm {
            emit_heatmap(map.gamma(), &c.out_dir.join(format!("gamma_phi{idx:02}.pgm")))?;
        }

        rows.push(CorrelationRow {
            phi,
            norm_out: out.norm_sqr(),
            gamma_total: map.total(),
            diag_fraction_engine: map.diagonal_fraction(),
            diag_fraction_oracle: oracle.diagonal_fraction(),
            max_rel_dev: max_rel_dev(&engine, oracle.gamma(), 1e-3),
        });
    }
    Ok(ScenarioResults::CorrelationMap(CorrelationReport { sites, rows }))
}

fn zernike_scenario(c: &ScenarioConfig) -> Result<ScenarioResults, RunError> {
    let bench = Bench::new(c)?;
    let det = bench.pair_detectors(c)?;
    let sites: Vec<i64> = det.sites().collect();
    let n_max = c.site_range as usize;
    let phi_magnitude = c.phi_list[0].abs();
    let plain = bench.sinusoidal(c, c.phase_amplitude);
    let combo = bench.zernike_composite(c);
    let quarter = CellPhase::CentralQuarter { delta: c.zernike_delta };

    // engine maps and marginals at ±φ for both mask stacks
    let mut engine = Vec::new(); // [(plain+, combo+), (plain-, combo-)]
    let mut marginal_fraction = Vec::new();
    for (tag, phi) in [("plus", phi_magnitude), ("minus", -phi_magnitude)] {
        let state = bench.entangled(c, phi)?;
        let out_plain = run_4f_biphoton(&state, &plain, bench.optics)?;
        let out_combo = run_4f_biphoton(&state, &combo, bench.optics)?;
        let map_plain = correlation_map(&out_plain, &det)?;
        let map_combo = correlation_map(&out_combo, &det)?;

        let m_plain = out_plain.intensity_marginal();
        let m_combo = out_combo.intensity_marginal();
        let dx = bench.grid.dx();
        let l1: f64 =
            m_plain.iter().zip(&m_combo).map(|(a, b)| (a - b).abs()).sum::<f64>() * dx;
        let flux: f64 = m_plain.iter().sum::<f64>() * dx;
        marginal_fraction.push(l1 / flux);

        if c.emit.csv {
            write_matrix_csv(
                &c.out_dir.join(format!("gamma_plain_{tag}.csv")),
                &sites,
                map_plain.gamma(),
            )?;
            write_matrix_csv(
                &c.out_dir.join(format!("gamma_zernike_{tag}.csv")),
                &sites,
                map_combo.gamma(),
            )?;
        }
        if c.emit.pgm {
            emit_heatmap(map_combo.gamma(), &c.out_dir.join(format!("gamma_zernike_{tag}.pgm")))?;
        }
        engine.push((map_plain.renormalized(), map_combo.renormalized()));
    }

    // oracle counterparts
    let oracle_plain_plus = oracle_correlation(phi_magnitude, c.phase_amplitude, 0, 1, n_max)?;
    let oracle_plain_minus = oracle_correlation(-phi_magnitude, c.phase_amplitude, 0, 1, n_max)?;
    let oracle_combo_plus = oracle_with_extra_phase(
        phi_magnitude,
        c.phase_amplitude,
        &quarter,
        0,
        1,
        n_max,
        c.quadrature_points,
    )?;
    let oracle_combo_minus = oracle_with_extra_phase(
        -phi_magnitude,
        c.phase_amplitude,
        &quarter,
        0,
        1,
        n_max,
        c.quadrature_points,
    )?;
    if c.emit.csv {
        write_matrix_csv(
            &c.out_dir.join("oracle_zernike_plus.csv"),
            &sites,
            oracle_combo_plus.gamma(),
        )?;
        write_matrix_csv(
            &c.out_dir.join("oracle_zernike_minus.csv"),
            &sites,
            oracle_combo_minus.gamma(),
        )?;
    }

    let report = ZernikeReport {
        sites,
        phi_magnitude,
        d_plain_engine: total_variation(&engine[0].0, &engine[1].0),
        d_zernike_engine: total_variation(&engine[0].1, &engine[1].1),
        d_plain_oracle: oracle_plain_plus.total_variation(&oracle_plain_minus),
        d_zernike_oracle: oracle_combo_plus.total_variation(&oracle_combo_minus),
        marginal_l1_fraction_plus: marginal_fraction[0],
        marginal_l1_fraction_minus: marginal_fraction[1],
        max_rel_dev_plain: f64::max(
            max_rel_dev(&engine[0].0, oracle_plain_plus.gamma(), 1e-3),
            max_rel_dev(&engine[1].0, oracle_plain_minus.gamma(), 1e-3),
        ),
        max_rel_dev_zernike: f64::max(
            max_rel_dev(&engine[0].1, oracle_combo_plus.gamma(), 1e-3),
            max_rel_dev(&engine[1].1, oracle_combo_minus.gamma(), 1e-3),
        ),
    };
    Ok(ScenarioResults::ZernikeRetrieval(report))
}

fn fermion_scenario(c: &ScenarioConfig) -> Result<ScenarioResults, RunError> {
    let bench = Bench::new(c)?;
    let mode_a = Field1D::gaussian(&bench.grid, -c.separation / 2.0, c.waist)?;
    let mode_b = Field1D::gaussian(&bench.grid, c.separation / 2.0, c.waist)?;
    let fermion = BiphotonState::fermion_pair(&mode_a, &mode_b)?;
    let boson = BiphotonState::product_pair(&Field1D::gaussian(&bench.grid, 0.0, c.waist)?)?;

    let mut rows: Vec<FermionRow> = Vec::new();
    let mut monotone = true;
    for &width in &c.aperture_width_list {
        let mask = MaskSpec::Aperture { center: 0.0, width };
        let fermion_norm_sqr = run_4f_biphoton(&fermion, &mask, bench.optics)?.norm_sqr();
        let boson_norm_sqr = run_4f_biphoton(&boson, &mask, bench.optics)?.norm_sqr();
        if let Some(prev) = rows.last() {
            if fermion_norm_sqr >= prev.fermion_norm_sqr {
                monotone = false;
            }
        }
        rows.push(FermionRow {
            width,
            boson_norm_sqr,
            fermion_norm_sqr,
            ratio: fermion_norm_sqr / boson_norm_sqr,
        });
    }
    if c.emit.csv {
        let table: Vec<(String, Vec<f64>)> = rows
            .iter()
            .map(|r| {
                (
                    format!("{:.12e}", r.width),
                    vec![r.boson_norm_sqr, r.fermion_norm_sqr, r.ratio],
                )
            })
            .collect();
        write_table_csv(
            &c.out_dir.join("transmission.csv"),
            &["width", "boson_norm_sqr", "fermion_norm_sqr", "ratio"],
            &table,
        )?;
    }
    let final_ratio = rows.last().map(|r| r.ratio).unwrap_or(f64::NAN);
    Ok(ScenarioResults::FermionAperture(FermionReport {
        rows,
        fermion_monotone_decreasing: monotone,
        final_ratio,
    }))
}

fn custom_scenario(c: &ScenarioConfig) -> Result<ScenarioResults, RunError> {
    let bench = Bench::new(c)?;
    let fourier = conjugate_grid(&bench.grid, bench.optics);
    let mask_path = resolved_mask_path(c);
    let mask = MaskSpec::custom_from_file(&mask_path, &fourier)?;

    let report = match c.custom_input {
        CustomInput::SingleBeam => {
            let beam = Field1D::gaussian(&bench.grid, 0.0, c.waist)?;
            let out = run_4f_single(&beam, &mask, bench.optics)?;
            if c.emit.csv {
                let rows: Vec<(String, Vec<f64>)> = bench
                    .grid
                    .positions()
                    .zip(out.intensity())
                    .map(|(x, i)| (format!("{x:.12e}"), vec![i]))
                    .collect();
                write_table_csv(&c.out_dir.join("marginal.csv"), &["x", "intensity"], &rows)?;
            }
            CustomReport {
                input: c.custom_input,
                norm_out: out.norm_sqr(),
                gamma_total: None,
                diag_fraction: None,
            }
        }
        CustomInput::PathEntangled => {
            let state = bench.entangled(c, c.phi_list[0])?;
            let out = run_4f_biphoton(&state, &mask, bench.optics)?;
            let det = bench.pair_detectors(c)?;
            let map = correlation_map(&out, &det)?;
            let sites: Vec<i64> = det.sites().collect();
            if c.emit.csv {
                write_matrix_csv(&c.out_dir.join("gamma.csv"), &sites, map.gamma())?;
                let marginal = out.intensity_marginal();
                let rows: Vec<(String, Vec<f64>)> = bench
                    .grid
                    .positions()
                    .zip(marginal)
                    .map(|(x, i)| (format!("{x:.12e}"), vec![i]))
                    .collect();
                write_table_csv(&c.out_dir.join("marginal.csv"), &["x", "intensity"], &rows)?;
            }
            if c.emit.pgm {
                emit_heatmap(map.gamma(), &c.out_dir.join("gamma.pgm"))?;
            }
            CustomReport {
                input: c.custom_input,
                norm_out: out.norm_sqr(),
                gamma_total: Some(map.total()),
                diag_fraction: Some(map.diagonal_fraction()),
            }
        }
    };
    Ok(ScenarioResults::Custom(report))
}

/// The mask file as given, resolved against the config's base directory
/// when one was attached (see [`ScenarioConfig::mask_base`]).
fn resolved_mask_path(c: &ScenarioConfig) -> PathBuf {
    let raw = PathBuf::from(c.mask_file.as_deref().unwrap_or_default());
    if raw.is_absolute() {
        return raw;
    }
    match &c.mask_base {
        Some(base) => base.join(raw),
        None => raw,
    }
}

impl ScenarioConfig {
    /// Resolve a relative `mask_file` against `base` (the config file's
    /// directory).
    pub fn set_mask_base(&mut self, base: &Path) {
        self.mask_base = Some(base.to_path_buf());
    }
}
