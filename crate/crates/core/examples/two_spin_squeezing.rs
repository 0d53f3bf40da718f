//! U-V two-spin squeezing and the two-mode criterion for Fock initial states
//! (N = 100, one revival period).

use spinorsim::algebra::ModelParams;
use spinorsim::evolve::{time_series, Observer, TimeGrid};
use spinorsim::fock::ModeOccupation;
use spinorsim::prepare::fock_state;
use spinorsim::squeeze::Angle;

fn main() -> spinorsim::Result<()> {
    let grid = TimeGrid::default();
    let observers = [
        Observer::XiUv(Angle::optimize()),
        Observer::XiPm(Angle::optimize()),
    ];
    println!(
        "{:>14} {:>12} {:>10} {:>12} {:>10}",
        "initial", "min xi_uv", "at t", "min sum", "at t"
    );
    for (a, b, c) in [
        (0, 100, 0),
        (1, 98, 1),
        (25, 50, 25),
        (50, 0, 50),
        (25, 0, 75),
    ] {
        let psi = fock_state(ModeOccupation::new(a, b, c));
        let ts = time_series(&psi, &ModelParams::default(), &grid, &observers)?;
        let argmin = |name: &str| {
            let col = &ts.column(name).unwrap().values;
            (1..col.len())
                .filter(|&i| col[i].is_finite())
                .min_by(|&i, &j| col[i].total_cmp(&col[j]))
                .map(|i| (col[i], ts.t[i]))
                .unwrap_or((f64::NAN, f64::NAN))
        };
        let (xi, t_xi) = argmin("xi_uv_min");
        let (sum, t_sum) = argmin("two_mode_sum");
        println!(
            "{:>14} {xi:>12.6} {t_xi:>10.5} {sum:>12.6} {t_sum:>10.5}",
            format!("|{a},{b},{c}>")
        );
    }
    Ok(())
}
