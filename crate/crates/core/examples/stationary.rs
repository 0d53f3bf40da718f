//! Coherent states with eta = a0^2 / (2 a- a+) = 1 are energy eigenstates; the
//! Raman state (eta = i/2) is not.

use std::f64::consts::PI;

use spinorsim::algebra::ModelParams;
use spinorsim::evolve::{time_series, Observer, TimeGrid};
use spinorsim::fock::Mode;
use spinorsim::prepare::{coherent_state, eta, CoherentSpec};

fn main() -> spinorsim::Result<()> {
    let grid = TimeGrid::new(0.0, PI, 128)?;
    let obs = [Observer::Population(Mode::Zero)];
    let cases = [
        ("a0^2 = 1/2, a- = a+", CoherentSpec::stationary_polar(100)),
        (
            "P0 = 1/3, theta = pi/2",
            CoherentSpec::from_p0_theta(100, 1.0 / 3.0, PI / 2.0)?,
        ),
    ];
    for (name, spec) in cases {
        let ts = time_series(
            &coherent_state(&spec)?,
            &ModelParams::default(),
            &grid,
            &obs,
        )?;
        let n0 = &ts.column("n_zero").unwrap().values;
        let drift = n0.iter().map(|x| (x - n0[0]).abs()).fold(0.0, f64::max);
        println!("{name}: {}", eta(&spec));
        println!("  <n0>(0) = {:.6}, max drift = {drift:.3e}", n0[0]);
    }
    Ok(())
}
