//! Config-driven scenario runner around [`biphoton_fourier`].
//!
//! A scenario is a flat `key = value` file (see [`config`]) naming one of
//! five experiments; [`scenario::run_scenario`] builds the optical system,
//! runs it, compares against the lattice oracle, and writes deterministic
//! CSV/JSON/PGM artifacts. The `simulate` binary is a thin shell over this
//! library.

pub mod config;
pub mod emit;
pub mod error;
pub mod scenario;

pub use config::{parse_config, ConfigError, CustomInput, EmitFlags, ScenarioConfig, ScenarioKind};
pub use emit::{emit_heatmap, HeatmapMeta};
pub use error::RunError;
pub use scenario::{
    run_scenario, CorrelationReport, CorrelationRow, CustomReport, FermionReport, FermionRow,
    IntensityRow, IntensitySweepReport, ScenarioResults, ScenarioSummary, ZernikeReport,
};
