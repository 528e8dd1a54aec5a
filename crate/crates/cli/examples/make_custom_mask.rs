//! Tabulate a custom Fourier-plane mask for the bundled `custom_mask.cfg`
//! scenario: a binary π-phase grating with the lattice period.
//!
//! The table must list every sample of the *Fourier* grid belonging to the
//! scenario's input grid, so it is generated with the same library calls the
//! runner uses:
//!
//! ```text
//! cargo run -p biphoton-fourier-cli --example make_custom_mask \
//!     > scenarios/masks/binary_pi_grating.txt
//! ```

use biphoton_fourier::{conjugate_grid, lattice_frequency, Grid, OpticsParams};

fn main() {
    // geometry of scenarios/custom_mask.cfg
    let grid = Grid::symmetric(1024, 8.0).unwrap();
    let optics = OpticsParams::new(808e-6, 100.0).unwrap();
    let separation = 0.5;

    let fourier = conjugate_grid(&grid, optics);
    let period = 1.0 / lattice_frequency(optics, separation);

    println!("# binary pi-phase grating, period {period:.17e} mm");
    println!("# columns: x(mm) phase(rad)");
    for x in fourier.positions() {
        let t = x / period;
        let phase = if t - t.floor() < 0.5 { std::f64::consts::PI } else { 0.0 };
        println!("{x:.17e} {phase:.17e}");
    }
}
