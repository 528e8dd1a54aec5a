//! Flat `key = value` scenario configuration with line-precise diagnostics.
//!
//! The format is deliberately plain: one `key = value` per line, `#`
//! comments, comma-separated lists, and an optional `pi` suffix on numbers
//! (`0.86pi`, `-0.5pi`, `pi`). A versioned defaults file compiled into the
//! binary supplies every physical and numeric parameter; a scenario file
//! picks the scenario and overrides whatever it needs.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The defaults compiled into the binary (see `defaults.cfg`).
pub const DEFAULTS: &str = include_str!("../defaults.cfg");

const PI: f64 = std::f64::consts::PI;

/// A configuration problem, pointing at the offending line when there is one.
#[derive(Debug, Clone, Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

fn err(line: Option<usize>, message: impl Into<String>) -> ConfigError {
    ConfigError { line, message: message.into() }
}

/// Which experiment to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    IntensitySweep,
    CorrelationMap,
    ZernikeRetrieval,
    FermionAperture,
    Custom,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::IntensitySweep => "intensity_sweep",
            ScenarioKind::CorrelationMap => "correlation_map",
            ScenarioKind::ZernikeRetrieval => "zernike_retrieval",
            ScenarioKind::FermionAperture => "fermion_aperture",
            ScenarioKind::Custom => "custom",
        }
    }
}

/// Input state for the `custom` scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CustomInput {
    PathEntangled,
    SingleBeam,
}

/// Which artifact kinds to write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmitFlags {
    pub csv: bool,
    pub json: bool,
    pub pgm: bool,
}

/// A fully resolved scenario description. Serialized verbatim into every
/// summary as the config echo (minus the output directory, so artifacts are
/// byte-identical wherever they are written).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    /// Wavelength (mm).
    pub lambda: f64,
    /// Focal length of both lenses (mm).
    pub focal_length: f64,
    /// Beam separation = detector pitch d (mm).
    pub separation: f64,
    /// Gaussian mode waist (mm).
    pub waist: f64,
    /// Detector bin half-width w (mm).
    pub fiber_half_width: f64,
    /// Grid points.
    pub samples: usize,
    /// Grid half-extent (mm).
    pub half_extent: f64,
    /// Lattice site window ±n_max.
    pub site_range: u32,
    /// Phase origin of periodic masks (mm).
    pub mask_origin: f64,
    /// Sinusoidal swing A_p (radians).
    pub phase_amplitude: f64,
    /// Sweep list for `intensity_sweep`.
    pub phase_amplitude_list: Vec<f64>,
    /// Input phases φ, each in (-π, π].
    pub phi_list: Vec<f64>,
    /// Quarter-cell extra phase (radians).
    pub zernike_delta: f64,
    /// Fourier-plane aperture widths for `fermion_aperture` (mm).
    pub aperture_width_list: Vec<f64>,
    /// Oracle quadrature nodes.
    pub quadrature_points: usize,
    /// Input state of the `custom` scenario.
    pub custom_input: CustomInput,
    /// Mask table for the `custom` scenario.
    pub mask_file: Option<String>,
    pub emit: EmitFlags,
    #[serde(skip)]
    pub out_dir: PathBuf,
    /// Base directory a relative `mask_file` resolves against (the config
    /// file's directory); machine-local, so excluded from the echo.
    #[serde(skip)]
    pub mask_base: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn grid_dx(&self) -> f64 {
        2.0 * self.half_extent / self.samples as f64
    }
}

/// `key = value` pairs with their line numbers; later occurrences are
/// rejected as duplicates within one source.
fn parse_pairs(text: &str) -> Result<BTreeMap<String, (usize, String)>, ConfigError> {
    let mut out: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(err(Some(line_no), format!("expected `key = value`, got {line:?}")));
        };
        let key = line[..eq].trim().to_string();
        let value = line[eq + 1..].trim().to_string();
        if key.is_empty() {
            return Err(err(Some(line_no), "missing key before `=`"));
        }
        if value.is_empty() {
            return Err(err(Some(line_no), format!("key `{key}` has no value")));
        }
        if out.insert(key.clone(), (line_no, value)).is_some() {
            return Err(err(Some(line_no), format!("duplicate key `{key}`")));
        }
    }
    Ok(out)
}

/// Parse a number with an optional `pi` suffix.
fn parse_number(s: &str) -> Option<f64> {
    let t = s.trim();
    if let Some(prefix) = t.strip_suffix("pi") {
        let factor = match prefix.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            p => p.parse::<f64>().ok()?,
        };
        Some(factor * PI)
    } else {
        t.parse::<f64>().ok()
    }
}

struct Resolver {
    pairs: BTreeMap<String, (usize, String)>,
    used: std::collections::BTreeSet<String>,
}

impl Resolver {
    fn get(&mut self, key: &str) -> Option<(usize, String)> {
        let hit = self.pairs.get(key).cloned();
        if hit.is_some() {
            self.used.insert(key.to_string());
        }
        hit
    }

    fn number(&mut self, key: &str) -> Result<Option<(usize, f64)>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, raw)) => match parse_number(&raw) {
                Some(v) => Ok(Some((line, v))),
                None => Err(err(Some(line), format!("key `{key}`: cannot parse number {raw:?}"))),
            },
        }
    }

    fn integer(&mut self, key: &str) -> Result<Option<(usize, u64)>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, raw)) => match raw.parse::<u64>() {
                Ok(v) => Ok(Some((line, v))),
                Err(_) => {
                    Err(err(Some(line), format!("key `{key}`: cannot parse integer {raw:?}")))
                }
            },
        }
    }

    fn number_list(&mut self, key: &str) -> Result<Option<(usize, Vec<f64>)>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some((line, raw)) => {
                let mut out = Vec::new();
                for item in raw.split(',') {
                    match parse_number(item) {
                        Some(v) => out.push(v),
                        None => {
                            return Err(err(
                                Some(line),
                                format!("key `{key}`: cannot parse number {:?}", item.trim()),
                            ))
                        }
                    }
                }
                Ok(Some((line, out)))
            }
        }
    }
}

/// Build a [`ScenarioConfig`] from a scenario file's text, overlaying the
/// compiled-in defaults. Line numbers in errors refer to the scenario file
/// (defaults are validated at build time by tests).
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let defaults = parse_pairs(DEFAULTS).expect("compiled-in defaults parse");
    let overrides = parse_pairs(text)?;
    // overlay: scenario file wins; defaults carry line 0 (no meaningful line)
    let mut merged = BTreeMap::new();
    for (k, (_, v)) in defaults {
        merged.insert(k, (0usize, v));
    }
    for (k, lv) in &overrides {
        merged.insert(k.clone(), lv.clone());
    }
    let mut r = Resolver { pairs: merged, used: Default::default() };

    let (scen_line, scen_raw) = r
        .get("scenario")
        .ok_or_else(|| err(None, "missing required key `scenario`"))?;
    let scenario = match scen_raw.as_str() {
        "intensity_sweep" => ScenarioKind::IntensitySweep,
        "correlation_map" => ScenarioKind::CorrelationMap,
        "zernike_retrieval" => ScenarioKind::ZernikeRetrieval,
        "fermion_aperture" => ScenarioKind::FermionAperture,
        "custom" => ScenarioKind::Custom,
        other => {
            return Err(err(
                Some(scen_line),
                format!(
                    "unknown scenario {other:?} (expected intensity_sweep, correlation_map, \
                     zernike_retrieval, fermion_aperture, or custom)"
                ),
            ))
        }
    };

    let mut positive = |key: &str| -> Result<(usize, f64), ConfigError> {
        let (line, v) =
            r.number(key)?.ok_or_else(|| err(None, format!("missing required key `{key}`")))?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(err(Some(line).filter(|l| *l > 0), format!("key `{key}` must be positive, got {v}")));
        }
        Ok((line, v))
    };

    let (_, lambda) = positive("lambda")?;
    let (_, focal_length) = positive("focal_length")?;
    let (_, separation) = positive("separation")?;
    let (_, waist) = positive("waist")?;
    let (_, fiber_half_width) = positive("fiber_half_width")?;
    let (_, half_extent) = positive("half_extent")?;
    let (mask_origin_line, mask_origin) = r
        .number("mask_origin")?
        .ok_or_else(|| err(None, "missing required key `mask_origin`"))?;
    let _ = mask_origin_line;
    let (_, samples) =
        r.integer("samples")?.ok_or_else(|| err(None, "missing required key `samples`"))?;
    let (_, site_range) =
        r.integer("site_range")?.ok_or_else(|| err(None, "missing required key `site_range`"))?;
    let (_, quadrature_points) = r
        .integer("quadrature_points")?
        .ok_or_else(|| err(None, "missing required key `quadrature_points`"))?;

    let (ap_line, phase_amplitude) = r
        .number("phase_amplitude")?
        .ok_or_else(|| err(None, "missing required key `phase_amplitude`"))?;
    if phase_amplitude < 0.0 {
        return Err(err(
            Some(ap_line).filter(|l| *l > 0),
            format!("key `phase_amplitude` must be non-negative, got {phase_amplitude}"),
        ));
    }
    let phase_amplitude_list = match r.number_list("phase_amplitude_list")? {
        Some((line, list)) => {
            for v in &list {
                if *v < 0.0 {
                    return Err(err(Some(line), "phase amplitudes must be non-negative"));
                }
            }
            list
        }
        None => vec![phase_amplitude],
    };

    // phi / phi_list (exclusive)
    let phi_single = r.number("phi")?;
    let phi_multi = r.number_list("phi_list")?;
    let phi_list = match (&phi_single, &phi_multi) {
        (_, Some((line, list))) => {
            // phi_list overrides the defaulted single phi; but both set in
            // the same file is ambiguous
            if overrides.contains_key("phi") && overrides.contains_key("phi_list") {
                return Err(err(Some(*line), "give either `phi` or `phi_list`, not both"));
            }
            list.clone()
        }
        (Some((_, v)), None) => vec![*v],
        (None, None) => return Err(err(None, "missing required key `phi`")),
    };
    for (i, phi) in phi_list.iter().enumerate() {
        if !(*phi > -PI && *phi <= PI) {
            let line = phi_multi.as_ref().map(|(l, _)| *l).or(phi_single.map(|(l, _)| l));
            return Err(err(
                line.filter(|l| *l > 0),
                format!("phi[{i}] = {phi} outside (-π, π]; use `pi` for the upper endpoint"),
            ));
        }
    }

    let (zd_line, zernike_delta) = r
        .number("zernike_delta")?
        .ok_or_else(|| err(None, "missing required key `zernike_delta`"))?;
    let _ = zd_line;

    let aperture_width_list = match r.number_list("aperture_width_list")? {
        Some((line, list)) => {
            for v in &list {
                if !(*v > 0.0) {
                    return Err(err(Some(line), "aperture widths must be positive"));
                }
            }
            list
        }
        None => Vec::new(),
    };

    let custom_input = match r.get("input") {
        None => CustomInput::PathEntangled,
        Some((line, raw)) => match raw.as_str() {
            "path_entangled" => CustomInput::PathEntangled,
            "single_beam" => CustomInput::SingleBeam,
            other => {
                return Err(err(
                    Some(line),
                    format!("unknown input {other:?} (expected path_entangled or single_beam)"),
                ))
            }
        },
    };

    let mask_file = r.get("mask_file").map(|(_, v)| v);
    let out_dir = PathBuf::from(r.get("out_dir").map(|(_, v)| v).unwrap_or_else(|| "out".into()));

    let emit = match r.get("emit") {
        None => EmitFlags { csv: true, json: true, pgm: true },
        Some((line, raw)) => {
            let mut flags = EmitFlags { csv: false, json: false, pgm: false };
            for item in raw.split(',') {
                match item.trim() {
                    "csv" => flags.csv = true,
                    "json" => flags.json = true,
                    "pgm" => flags.pgm = true,
                    other => {
                        return Err(err(
                            Some(line),
                            format!("unknown emit flag {other:?} (expected csv, json, pgm)"),
                        ))
                    }
                }
            }
            flags
        }
    };

    // reject unknown keys in the scenario file, with their lines
    for (key, (line, _)) in &overrides {
        if !r.used.contains(key) {
            return Err(err(Some(*line), format!("unknown key `{key}`")));
        }
    }

    let config = ScenarioConfig {
        scenario,
        lambda,
        focal_length,
        separation,
        waist,
        fiber_half_width,
        samples: samples as usize,
        half_extent,
        site_range: site_range as u32,
        mask_origin,
        phase_amplitude,
        phase_amplitude_list,
        phi_list,
        zernike_delta,
        aperture_width_list,
        quadrature_points: quadrature_points as usize,
        custom_input,
        mask_file,
        emit,
        out_dir,
        mask_base: None,
    };
    validate(&config)?;
    Ok(config)
}

/// Cross-field checks: grid resolution, commensurability, detector fit.
fn validate(c: &ScenarioConfig) -> Result<(), ConfigError> {
    if c.samples < 2 {
        return Err(err(None, format!("samples = {} is too small", c.samples)));
    }
    if c.site_range == 0 {
        return Err(err(None, "site_range must be at least 1"));
    }
    if c.quadrature_points < 256 {
        return Err(err(
            None,
            format!("quadrature_points = {} below the floor of 256", c.quadrature_points),
        ));
    }
    let dx = c.grid_dx();
    if c.waist < 4.0 * dx {
        return Err(err(
            None,
            format!(
                "waist {} is unresolvable: needs at least 4 samples, dx = {dx} \
                 (raise `samples` or shrink `half_extent`)",
                c.waist
            ),
        ));
    }
    // the two beams must be separable for the stated input normalization
    let overlap = (-c.separation * c.separation / (2.0 * c.waist * c.waist)).exp();
    if overlap >= 1e-6 {
        return Err(err(
            None,
            format!(
                "beams at separation {} with waist {} overlap too strongly \
                 (<a|b> = {overlap:.2e} ≥ 1e-6)",
                c.separation, c.waist
            ),
        ));
    }
    if 2.0 * c.fiber_half_width > c.separation * (1.0 + 1e-12) {
        return Err(err(
            None,
            format!(
                "fiber_half_width {} makes bins overlap at pitch {}",
                c.fiber_half_width, c.separation
            ),
        ));
    }

    let periodic = matches!(
        c.scenario,
        ScenarioKind::IntensitySweep | ScenarioKind::CorrelationMap | ScenarioKind::ZernikeRetrieval
    );
    if periodic {
        // the Fourier-plane mask period must fit the Fourier grid exactly:
        // samples per period = span / separation
        let per = 2.0 * c.half_extent / c.separation;
        if (per - per.round()).abs() > 1e-9 {
            return Err(err(
                None,
                format!(
                    "span {} is not an integer number of separations {} \
                     (mask period must be commensurate with the Fourier grid)",
                    2.0 * c.half_extent,
                    c.separation
                ),
            ));
        }
        if per.round() < 9.0 {
            return Err(err(
                None,
                format!(
                    "span/separation = {} gives fewer than 9 Fourier samples per mask period",
                    per.round()
            ),
            ));
        }
        // detector window must sit inside the grid (beams at ∓d/2)
        let farthest = c.separation / 2.0
            + c.site_range as f64 * c.separation
            + c.fiber_half_width;
        if farthest > c.half_extent {
            return Err(err(
                None,
                format!(
                    "outermost detector edge at {farthest} mm falls outside \
                     half_extent {} mm (shrink site_range or grow the grid)",
                    c.half_extent
                ),
            ));
        }
    }
    if c.scenario == ScenarioKind::FermionAperture && c.aperture_width_list.is_empty() {
        return Err(err(None, "fermion_aperture needs `aperture_width_list`"));
    }
    if c.scenario == ScenarioKind::Custom && c.mask_file.is_none() {
        return Err(err(None, "custom scenario needs `mask_file`"));
    }
    Ok(())
}
