//! Isospin squeezing of the Raman-prepared coherent state (P0 = 1/3, theta = pi/2):
//! xi_phi at the fixed angle 2pi/3 and its minimum over the angle, over the
//! early window where the squeezing dip appears.

use std::f64::consts::PI;

use spinorsim::algebra::ModelParams;
use spinorsim::evolve::{time_series, Observer, TimeGrid};
use spinorsim::prepare::{coherent_state, eta, CoherentSpec};
use spinorsim::squeeze::Angle;

fn main() -> spinorsim::Result<()> {
    let spec = CoherentSpec::from_p0_theta(100, 1.0 / 3.0, PI / 2.0)?;
    println!("{}", eta(&spec));
    let psi = coherent_state(&spec)?;
    let obs = [
        Observer::XiPhi(Angle::Fixed(2.0 * PI / 3.0)),
        Observer::XiPhi(Angle::optimize()),
    ];
    let ts = time_series(
        &psi,
        &ModelParams::default(),
        &TimeGrid::new(0.0, 0.05, 40)?,
        &obs,
    )?;
    let fixed = ts.column("xi_phi_fixed").unwrap();
    let best = ts.column("xi_phi_min").unwrap();
    let angle = ts.column("phi_min").unwrap();
    println!(
        "{:>8} {:>12} {:>12} {:>10}",
        "t", "xi(2pi/3)", "xi_min", "phi_min"
    );
    for (i, t) in ts.t.iter().enumerate() {
        println!(
            "{t:>8.4} {:>12.6} {:>12.6} {:>10.4}",
            fixed.values[i], best.values[i], angle.values[i]
        );
    }
    Ok(())
}
