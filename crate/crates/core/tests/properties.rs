use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;

use spinorsim::algebra::ModelParams;
use spinorsim::cli::{check_command, parse_number, run, Cell, Command, RunConfig};
use spinorsim::evolve::Evolver;
use spinorsim::fock::{ModeOccupation, StateVector};
use spinorsim::prepare::{coherent_state, eta, CoherentSpec};
use spinorsim::squeeze::{xi_phi, Angle};

fn coherent(n: u32, w: [f64; 3], phases: [f64; 3]) -> CoherentSpec {
    let s: f64 = w.iter().sum();
    CoherentSpec::from_polar(n, w.map(|x| x / s), phases).unwrap()
}

fn params() -> impl Strategy<Value = ModelParams> {
    (-2.0..-0.1f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(lambda_a, lambda_s, mu)| ModelParams {
        lambda_a,
        lambda_s,
        mu,
        magnetic: None,
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn evolution_is_unitary_and_composes(
        n in 1u32..25,
        w in prop::array::uniform3(0.05..1.0f64),
        ph in prop::array::uniform3(0.0..2.0 * PI),
        p in params(),
        t1 in 0.0..3.0f64,
        t2 in 0.0..3.0f64,
    ) {
        let psi = coherent_state(&coherent(n, w, ph)).unwrap();
        let ev = Evolver::new(p);
        let a = ev.evolve(&psi, t1).unwrap();
        assert_relative_eq!(a.norm_sqr(), 1.0, epsilon = 1e-12);
        let ab = ev.evolve(&a, t2).unwrap();
        let direct = ev.evolve(&psi, t1 + t2).unwrap();
        prop_assert!(1.0 - ab.overlap(&direct).unwrap() < 1e-10);
    }

    #[test]
    fn pure_lambda_a_revives_at_pi(
        n in 1u32..30,
        w in prop::array::uniform3(0.05..1.0f64),
        ph in prop::array::uniform3(0.0..2.0 * PI),
    ) {
        let psi = coherent_state(&coherent(n, w, ph)).unwrap();
        let back = Evolver::new(ModelParams::default()).evolve(&psi, PI).unwrap();
        assert_relative_eq!(psi.overlap(&back).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn one_state_blocks_are_stationary(k in 0u32..40, plus in any::<bool>(), p in params(), t in 0.0..5.0f64) {
        // with n0 = 0 and all atoms in one mode the (N, m) block has a single state
        let occ = if plus { ModeOccupation::new(0, 0, k) } else { ModeOccupation::new(k, 0, 0) };
        let psi = StateVector::basis_state(&occ);
        let back = Evolver::new(p).evolve(&psi, t).unwrap();
        assert_relative_eq!(psi.overlap(&back).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eta_is_phase_covariant(
        w in prop::array::uniform3(0.05..1.0f64),
        ph in prop::array::uniform3(0.0..2.0 * PI),
        shift in 0.0..2.0 * PI,
    ) {
        // a global phase and an equal-and-opposite shift of alpha+- leave eta unchanged
        let a = eta(&coherent(10, w, ph)).eta.unwrap();
        let b = eta(&coherent(10, w, [ph[0] + shift, ph[1] + shift, ph[2] + shift])).eta.unwrap();
        let c = eta(&coherent(10, w, [ph[0] + shift, ph[1], ph[2] - shift])).eta.unwrap();
        prop_assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
        prop_assert!((a - c).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn optimized_xi_phi_beats_any_fixed_angle(
        n in 2u32..12,
        w in prop::array::uniform3(0.05..1.0f64),
        ph in prop::array::uniform3(0.0..2.0 * PI),
        phi in 0.0..PI,
    ) {
        let psi = coherent_state(&coherent(n, w, ph)).unwrap();
        let best = xi_phi(&psi, Angle::optimize()).unwrap();
        let fixed = xi_phi(&psi, Angle::Fixed(phi)).unwrap();
        if best.defined && fixed.defined {
            prop_assert!(best.value <= fixed.value * (1.0 + 1e-9));
        }
    }

    #[test]
    fn numbers_roundtrip(x in -1e6..1e6f64, k in 1u32..12) {
        assert_relative_eq!(parse_number(&format!("{x:e}")).unwrap(), x);
        assert_relative_eq!(parse_number(&format!("{k}*pi/7")).unwrap(), k as f64 * PI / 7.0, max_relative = 1e-15);
    }

    #[test]
    fn csv_cells_roundtrip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(Cell::Num(x).render().parse::<f64>().unwrap(), x);
    }
}

#[test]
fn stationary_command_reports_eta() {
    let cfg = RunConfig::parse(
        "N = 20\nstate.kind = coherent\nstate.P_minus = 1/4\nstate.P_zero = 1/2\nstate.P_plus = 1/4\ntime.steps = 16\n",
    )
    .unwrap();
    let out = run(Command::Stationary, &cfg, 0).unwrap();
    assert_eq!(out.exit_code, 0);
    let csv = out.artifact("stationary.csv").unwrap();
    assert!(csv.lines().next().unwrap().contains("max_drift"));
    assert_eq!(csv.lines().count(), 18);
}

#[test]
fn scan_requires_a_state() {
    let cfg = RunConfig::parse("N = 10\n").unwrap();
    assert!(check_command(Command::Scan, &cfg).is_err());
    assert!(check_command(Command::Ground, &cfg).is_ok());
}
