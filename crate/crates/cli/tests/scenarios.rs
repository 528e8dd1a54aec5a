//! Scenario-level behavior beyond the acceptance criteria: identity-mask
//! sanity, the single-beam custom input, and summary round-trips.

use std::fs;
use std::io::Write;
use std::path::Path;

use biphoton_fourier::{conjugate_grid, Grid, OpticsParams};
use biphoton_fourier_cli::{parse_config, run_scenario, ScenarioResults};

#[test]
fn identity_mask_reproduces_the_two_spot_input_map() {
    // A_p = 0: the grating is the identity, so Γ must be the input's two
    // diagonal spots and sit on top of the oracle to well under 1e-6.
    let dir = tempfile::tempdir().unwrap();
    let mut config = parse_config(
        "scenario = correlation_map\nphase_amplitude = 0\nphi_list = 0, 0.5pi\n\
         samples = 1024\nsite_range = 4\n",
    )
    .unwrap();
    config.out_dir = dir.path().to_path_buf();
    let summary = run_scenario(&config).unwrap();
    let ScenarioResults::CorrelationMap(report) = &summary.results else {
        panic!("wrong report kind")
    };
    for row in &report.rows {
        assert!(row.max_rel_dev < 1e-6, "phi {}: deviation {}", row.phi, row.max_rel_dev);
        assert!((row.diag_fraction_engine - 1.0).abs() < 1e-9, "all mass on the diagonal");
        assert!((row.norm_out - 1.0).abs() < 1e-9);
    }
    // the raw map carries two equal spots of one half each (up to fiber capture)
    let text = fs::read_to_string(dir.path().join("gamma_phi00.csv")).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    // header + 9 sites; spots at sites 0 and 1 -> rows 5 and 6, columns 5 and 6
    let cell = |line: usize, col: usize| -> f64 {
        rows[line].split(',').nth(col).unwrap().parse().unwrap()
    };
    assert!((cell(5, 5) - 0.5).abs() < 1e-3);
    assert!((cell(6, 6) - 0.5).abs() < 1e-3);
    assert!(cell(5, 6) < 1e-12);
}

#[test]
fn custom_scenario_accepts_a_single_beam() {
    let dir = tempfile::tempdir().unwrap();

    // tabulate a quadratic phase on the Fourier grid of the scenario
    let grid = Grid::symmetric(1024, 8.0).unwrap();
    let optics = OpticsParams::new(808e-6, 100.0).unwrap();
    let fourier = conjugate_grid(&grid, optics);
    let mask_path = dir.path().join("lens_like.txt");
    let mut f = fs::File::create(&mask_path).unwrap();
    for x in fourier.positions() {
        writeln!(f, "{:.17e} {:.17e}", x, 0.8 * x * x).unwrap();
    }
    drop(f);

    let cfg_path = dir.path().join("run.cfg");
    fs::write(
        &cfg_path,
        format!(
            "scenario = custom\ninput = single_beam\nsamples = 1024\nhalf_extent = 8.0\n\
             site_range = 5\nmask_file = {}\n",
            mask_path.display()
        ),
    )
    .unwrap();
    let mut config = parse_config(&fs::read_to_string(&cfg_path).unwrap()).unwrap();
    config.set_mask_base(Path::new("/"));
    config.out_dir = dir.path().join("out");
    let summary = run_scenario(&config).unwrap();
    let ScenarioResults::Custom(report) = &summary.results else { panic!("wrong report kind") };
    // phase-only custom mask: unitary
    assert!((report.norm_out - 1.0).abs() < 1e-9);
    assert!(report.gamma_total.is_none());
    assert!(config.out_dir.join("marginal.csv").exists());
    assert!(config.out_dir.join("summary.json").exists());
}

#[test]
fn summary_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = parse_config(
        "scenario = correlation_map\nphase_amplitude = 0\nphi = 0\nsamples = 1024\n\
         site_range = 4\n",
    )
    .unwrap();
    config.out_dir = dir.path().to_path_buf();
    let returned = run_scenario(&config).unwrap();
    let parsed: biphoton_fourier_cli::ScenarioSummary =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(
        serde_json::to_string(&returned).unwrap(),
        serde_json::to_string(&parsed).unwrap()
    );
}
