//! `simulate <config-path> [--out DIR] [--emit csv,json,pgm] [--seedless]`
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric/runtime error.

use std::path::PathBuf;
use std::process::ExitCode;

use biphoton_fourier_cli::config::EmitFlags;
use biphoton_fourier_cli::scenario::ScenarioResults;
use biphoton_fourier_cli::{parse_config, run_scenario, RunError};

const USAGE: &str = "\
usage: simulate <config-path> [--out DIR] [--emit csv,json,pgm] [--seedless]

  <config-path>  flat key = value scenario file (# comments, `pi` suffix ok)
  --out DIR      override the config's out_dir
  --emit LIST    override which artifacts to write (csv, json, pgm)
  --seedless     accepted for compatibility; every run is deterministic
";

struct Args {
    config_path: PathBuf,
    out: Option<PathBuf>,
    emit: Option<EmitFlags>,
}

fn parse_args(argv: &[String]) -> Result<Args, String> {
    let mut config_path = None;
    let mut out = None;
    let mut emit = None;
    let mut it = argv.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--out" => {
                let dir = it.next().ok_or("--out needs a directory")?;
                out = Some(PathBuf::from(dir));
            }
            "--emit" => {
                let list = it.next().ok_or("--emit needs a list like csv,json")?;
                let mut flags = EmitFlags { csv: false, json: false, pgm: false };
                for item in list.split(',') {
                    match item.trim() {
                        "csv" => flags.csv = true,
                        "json" => flags.json = true,
                        "pgm" => flags.pgm = true,
                        other => return Err(format!("unknown emit flag {other:?}")),
                    }
                }
                emit = Some(flags);
            }
            "--seedless" => {}
            "--help" | "-h" => return Err(String::new()),
            other if other.starts_with('-') => return Err(format!("unknown flag {other:?}")),
            other => {
                if config_path.replace(PathBuf::from(other)).is_some() {
                    return Err("expected exactly one config path".into());
                }
            }
        }
    }
    Ok(Args {
        config_path: config_path.ok_or("missing config path")?,
        out,
        emit,
    })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let args = match parse_args(&argv) {
        Ok(a) => a,
        Err(msg) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            eprint!("{USAGE}");
            return ExitCode::from(2);
        }
    };

    let text = match std::fs::read_to_string(&args.config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config_path.display());
            return ExitCode::from(2);
        }
    };
    let mut config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config_path.display());
            return ExitCode::from(2);
        }
    };
    if let Some(base) = args.config_path.parent() {
        config.set_mask_base(base);
    }
    if let Some(out) = args.out {
        config.out_dir = out;
    }
    if let Some(emit) = args.emit {
        config.emit = emit;
    }

    match run_scenario(&config) {
        Ok(summary) => {
            println!("scenario: {}", summary.scenario);
            println!("out_dir:  {}", config.out_dir.display());
            match &summary.results {
                ScenarioResults::IntensitySweep(r) => {
                    for row in &r.rows {
                        println!(
                            "A_p = {:>10.6}: max rel dev {:.3e}, participation {:.4} (oracle {:.4})",
                            row.phase_amplitude,
                            row.max_rel_dev_single,
                            row.participation_engine,
                            row.participation_oracle
                        );
                    }
                }
                ScenarioResults::CorrelationMap(r) => {
                    for row in &r.rows {
                        println!(
                            "phi = {:>10.6}: diag fraction {:.6} (oracle {:.6}), max rel dev {:.3e}",
                            row.phi,
                            row.diag_fraction_engine,
                            row.diag_fraction_oracle,
                            row.max_rel_dev
                        );
                    }
                }
                ScenarioResults::ZernikeRetrieval(r) => {
                    println!(
                        "D without filter: {:.3e} (oracle {:.3e})",
                        r.d_plain_engine, r.d_plain_oracle
                    );
                    println!(
                        "D with filter:    {:.6} (oracle {:.6})",
                        r.d_zernike_engine, r.d_zernike_oracle
                    );
                    println!(
                        "marginal L1 fraction: +phi {:.4}, -phi {:.4}",
                        r.marginal_l1_fraction_plus, r.marginal_l1_fraction_minus
                    );
                }
                ScenarioResults::FermionAperture(r) => {
                    for row in &r.rows {
                        println!(
                            "width {:>8.5}: boson {:.6e}, fermion {:.6e}, ratio {:.4e}",
                            row.width, row.boson_norm_sqr, row.fermion_norm_sqr, row.ratio
                        );
                    }
                    println!(
                        "fermion transmission monotone decreasing: {}",
                        r.fermion_monotone_decreasing
                    );
                }
                ScenarioResults::Custom(r) => {
                    println!("norm out: {:.9}", r.norm_out);
                    if let Some(g) = r.gamma_total {
                        println!("gamma total: {g:.9}");
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(RunError::Config(e)) => {
            eprintln!("error: {}: {e}", args.config_path.display());
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
