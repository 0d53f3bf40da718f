//! Config-driven runner behind the `spinorsim` binary.
//!
//! Every subcommand computes all of its artifacts in memory first and writes
//! them only once nothing can fail any more, so a bad config or a numerical
//! failure leaves the output directory untouched.

mod config;
mod output;
mod validate;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::algebra::OperatorKind;
use crate::error::{Error, Result};
use crate::evolve::{time_series, Evolver, Observer, TimeSeries};
use crate::fock::{Mode, StateVector};
use crate::ground::{
    chain_solver, gaussian_profile, ground_state, one_particle_density_with, Parity,
};
use crate::prepare::{angular_state, coherent_state, eta, fock_state};
use crate::squeeze::{Angle, SqueezeMoments};

pub use config::{parse_number, Outputs, RunConfig, StateConfig, MAX_N};
pub use output::{emit_plot_script, plot_script, Cell, Figure, Panel, Style, Table};
pub use validate::{random_coherent, random_state, run_suite, Check, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Ground,
    Evolve,
    Scan,
    Stationary,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Ground => "ground",
            Command::Evolve => "evolve",
            Command::Scan => "scan",
            Command::Stationary => "stationary",
            Command::Validate => "validate",
        }
    }
}

/// Process exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } => EXIT_CONFIG,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_NUMERICAL,
    }
}

/// A file to be written into the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// Everything a run produced, not yet on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    /// Printed to stdout by the binary.
    pub summary: String,
    pub exit_code: i32,
}

impl RunOutput {
    pub fn artifact(&self, name: &str) -> Option<&str> {
        self.artifacts
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.contents.as_str())
    }

    /// Creates `dir` if needed and writes every artifact; returns the paths.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        for a in &self.artifacts {
            let p = dir.join(&a.name);
            std::fs::write(&p, &a.contents)?;
            paths.push(p);
        }
        Ok(paths)
    }
}

/// Checks that the config carries what `cmd` needs.
pub fn check_command(cmd: Command, cfg: &RunConfig) -> Result<()> {
    match cmd {
        Command::Evolve | Command::Scan if cfg.state.is_none() => Err(Error::config(
            "state.kind",
            format!("`{}` needs an initial state", cmd.name()),
        )),
        Command::Stationary => match cfg.state {
            Some(StateConfig::Coherent(_)) => Ok(()),
            _ => Err(Error::config(
                "state.kind",
                "`stationary` needs state.kind = coherent",
            )),
        },
        _ => Ok(()),
    }
}

fn initial_state(cfg: &RunConfig) -> Result<StateVector> {
    match cfg.state.as_ref().expect("checked by check_command") {
        StateConfig::Fock(occ) => Ok(fock_state(*occ)),
        StateConfig::Coherent(spec) => coherent_state(spec),
        StateConfig::Angular { label, method } => angular_state(*label, *method),
    }
}

struct Names {
    csv: String,
    report: String,
    plot: String,
}

fn names(cfg: &RunConfig, cmd: Command) -> Names {
    let csv = cfg
        .outputs
        .csv
        .clone()
        .unwrap_or_else(|| format!("{}.csv", cmd.name()));
    let stem = csv.strip_suffix(".csv").unwrap_or(&csv).to_string();
    Names {
        report: cfg
            .outputs
            .report
            .clone()
            .unwrap_or_else(|| format!("{stem}_report.txt")),
        plot: format!("{stem}.gp"),
        csv,
    }
}

/// Runs `cmd`; `seed` only feeds the randomized draws of `validate`.
pub fn run(cmd: Command, cfg: &RunConfig, seed: u64) -> Result<RunOutput> {
    check_command(cmd, cfg)?;
    let names = names(cfg, cmd);
    let (table, report, figures, mut exit) = match cmd {
        Command::Ground => run_ground(cfg, &names)?,
        Command::Evolve => run_evolve(cfg)?,
        Command::Scan => run_scan(cfg)?,
        Command::Stationary => run_stationary(cfg)?,
        Command::Validate => run_validate(cfg, seed)?,
    };
    let mut artifacts = vec![Artifact {
        name: names.csv.clone(),
        contents: table.to_csv()?,
    }];
    if let Some((summary_name, summary)) = report.extra_csv {
        artifacts.push(Artifact {
            name: summary_name,
            contents: summary.to_csv()?,
        });
    }
    if cfg.outputs.plot_script {
        artifacts.push(Artifact {
            name: names.plot.clone(),
            contents: plot_script(&names.csv, &table.columns, &figures)?,
        });
    }
    artifacts.push(Artifact {
        name: names.report.clone(),
        contents: report.text.clone(),
    });
    if exit == EXIT_OK && report.validation_failed {
        exit = EXIT_VALIDATION;
    }
    Ok(RunOutput {
        artifacts,
        summary: report.text,
        exit_code: exit,
    })
}

struct Report {
    text: String,
    extra_csv: Option<(String, Table)>,
    validation_failed: bool,
}

impl Report {
    fn text(text: String) -> Self {
        Self {
            text,
            extra_csv: None,
            validation_failed: false,
        }
    }
}

type Outcome = (Table, Report, Vec<Figure>, i32);

fn run_ground(cfg: &RunConfig, names: &Names) -> Result<Outcome> {
    let n = cfg.total_n;
    let (energy, psi) = ground_state(n, cfg.ground_m, &cfg.params)?;
    let rho = one_particle_density_with(&psi, cfg.fraction)?;
    let key = match psi.scope() {
        crate::fock::Scope::Block(k) => k,
        crate::fock::Scope::Full { .. } => unreachable!("ground states live in one block"),
    };
    let exact: Vec<f64> = psi.amplitudes().iter().map(|a| a.re).collect();
    let n_zero: Vec<u32> = (0..key.dim()).map(|i| key.state_at(i).n_zero).collect();

    // the Gaussian and the even chain live on the m = 0, even-n0 lattice
    let on_lattice = cfg.ground_m == 0 && n.is_multiple_of(2) && n >= 4;
    let gauss = on_lattice.then(|| gaussian_profile(n)).transpose()?;
    let chains = (n >= 4)
        .then(|| -> Result<_> {
            Ok((
                chain_solver(n, Parity::Even)?,
                chain_solver(n, Parity::Odd)?,
            ))
        })
        .transpose()?;
    let chain_even = chains
        .as_ref()
        .filter(|_| on_lattice)
        .map(|(e, _)| e.ground_vector());

    let mut table = Table::new([
        "n_zero",
        "Y",
        "exact",
        "gaussian",
        "chain_even",
        "gaussian_defined",
        "chain_even_defined",
    ]);
    for (i, &k) in n_zero.iter().enumerate() {
        let g = gauss.as_ref().map(|g| g.amplitudes[i]);
        let c = chain_even.as_ref().map(|c| c[i]);
        table.push(vec![
            Cell::Int(k as i64),
            Cell::Num(n as f64 / 3.0 - k as f64),
            Cell::Num(exact[i]),
            Cell::Num(g.unwrap_or(f64::NAN)),
            Cell::Num(c.unwrap_or(f64::NAN)),
            Cell::Bool(g.is_some()),
            Cell::Bool(c.is_some()),
        ]);
    }

    let overlap = |v: &[f64]| -> f64 {
        v.iter()
            .zip(&exact)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            .powi(2)
    };
    let gauss_overlap = gauss.as_ref().map(|g| overlap(&g.amplitudes));
    let chain_overlap = chain_even.as_deref().map(overlap);
    let (even_e0, odd_e0, gap) = match &chains {
        Some((e, o)) => {
            let (a, b) = (e.energies[0], o.energies[0]);
            (a, b, (a - b).abs() / a.abs().max(b.abs()))
        }
        None => (f64::NAN, f64::NAN, f64::NAN),
    };
    let d = rho.diagonal();
    let mut summary = Table::new([
        "N",
        "m",
        "energy",
        "n_minus",
        "n_zero",
        "n_plus",
        "rho_eig_0",
        "rho_eig_1",
        "rho_eig_2",
        "macroscopic",
        "fragmented",
        "gaussian_overlap_sq",
        "chain_even_overlap_sq",
        "chain_even_e0",
        "chain_odd_e0",
        "chain_relative_gap",
    ]);
    summary.push(vec![
        Cell::Int(n as i64),
        Cell::Int(cfg.ground_m as i64),
        Cell::Num(energy),
        Cell::Num(d[0]),
        Cell::Num(d[1]),
        Cell::Num(d[2]),
        Cell::Num(rho.eigenvalues[0]),
        Cell::Num(rho.eigenvalues[1]),
        Cell::Num(rho.eigenvalues[2]),
        Cell::Int(rho.macroscopic_count() as i64),
        Cell::Bool(rho.fragmented),
        Cell::Num(gauss_overlap.unwrap_or(f64::NAN)),
        Cell::Num(chain_overlap.unwrap_or(f64::NAN)),
        Cell::Num(even_e0),
        Cell::Num(odd_e0),
        Cell::Num(gap),
    ]);

    let mut text = String::new();
    let _ = writeln!(text, "ground state of block (N={n}, m={})", cfg.ground_m);
    let _ = writeln!(text, "  energy = {energy:.12}");
    let _ = writeln!(text, "{rho}");
    match gauss_overlap {
        Some(o) => {
            let _ = writeln!(text, "  |<exact|gaussian>|^2 = {o:.12}");
        }
        None => {
            let _ = writeln!(text, "  gaussian profile: only for m = 0 and even N >= 4");
        }
    }
    if let Some(o) = chain_overlap {
        let _ = writeln!(text, "  |<exact|chain_even>|^2 = {o:.12}");
    }
    if chains.is_some() {
        let _ = writeln!(
            text,
            "  chain ground energies: even {even_e0:.9}, odd {odd_e0:.9}, relative gap {gap:.3e} (3/N = {:.3e})",
            3.0 / n as f64
        );
    }

    let mut curves = vec![("exact", Style::Points)];
    if gauss.is_some() {
        curves.push(("gaussian", Style::Solid));
    }
    if chain_even.is_some() {
        curves.push(("chain_even", Style::Dashed));
    }
    let figures = vec![Figure {
        name: "ground_profile".into(),
        panels: vec![Panel::new("psi(n_zero)", &curves)],
    }];
    let stem = names.csv.strip_suffix(".csv").unwrap_or(&names.csv);
    let report = Report {
        text,
        extra_csv: Some((format!("{stem}_summary.csv"), summary)),
        validation_failed: false,
    };
    Ok((table, report, figures, EXIT_OK))
}

fn evolve_observers(cfg: &RunConfig) -> Vec<Observer> {
    let s = &cfg.squeeze;
    vec![
        Observer::Population(Mode::Minus),
        Observer::Population(Mode::Zero),
        Observer::Population(Mode::Plus),
        Observer::Mean(OperatorKind::Y),
        Observer::Mean(OperatorKind::T3),
        Observer::XiPhi(Angle::Fixed(s.phi)),
        Observer::XiPhi(Angle::Optimize(s.phi_scan)),
        Observer::XiUv(Angle::Fixed(s.alpha)),
        Observer::XiUv(Angle::Optimize(s.alpha_scan)),
        Observer::XiPm(Angle::Optimize(s.alpha_scan)),
    ]
}

/// `(t, value)` of the smallest defined entry of `col`, skipping `t = start`.
fn defined_min(ts: &TimeSeries, col: &str) -> Option<(f64, f64)> {
    let c = ts.column(col)?;
    (1..ts.len())
        .filter(|&i| c.defined.as_ref().is_none_or(|d| d[i]))
        .map(|i| (ts.t[i], c.values[i]))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

fn run_evolve(cfg: &RunConfig) -> Result<Outcome> {
    let psi0 = initial_state(cfg)?;
    let ts = time_series(&psi0, &cfg.params, &cfg.grid, &evolve_observers(cfg))?;
    let table = Table::from_series(&ts);

    let mut text = String::new();
    let _ = writeln!(
        text,
        "evolution of N = {} over t in [{}, {}] ({} steps)",
        cfg.total_n,
        cfg.grid.t_start(),
        cfg.grid.t_stop(),
        cfg.grid.steps()
    );
    for col in [
        "xi_phi_fixed",
        "xi_phi_min",
        "xi_uv_fixed",
        "xi_uv_min",
        "two_mode_sum",
    ] {
        match defined_min(&ts, col) {
            Some((t, v)) => {
                let _ = writeln!(text, "  min {col:<14} = {v:.9} at t = {t:.6}");
            }
            None => {
                let _ = writeln!(text, "  min {col:<14} undefined on the whole grid");
            }
        }
    }
    if let Some(c) = ts.column("phi_min") {
        let d = ts
            .column("xi_phi_min")
            .and_then(|c| c.defined.clone())
            .unwrap_or_default();
        let vals: Vec<f64> = c
            .values
            .iter()
            .zip(&d)
            .filter(|(_, ok)| **ok)
            .map(|(v, _)| *v)
            .collect();
        if !vals.is_empty() {
            let _ = writeln!(
                text,
                "  time-averaged phi_min = {:.6} rad",
                vals.iter().sum::<f64>() / vals.len() as f64
            );
        }
    }
    let figures = vec![
        Figure {
            name: "xi_phi".into(),
            panels: vec![Panel::new(
                "xi_phi (fixed phi)",
                &[("xi_phi_fixed", Style::Solid)],
            )],
        },
        Figure {
            name: "xi_phi_min".into(),
            panels: vec![
                Panel::new("xi_phi_min", &[("xi_phi_min", Style::Solid)]),
                Panel::new("phi_min", &[("phi_min", Style::Solid)]),
            ],
        },
        Figure {
            name: "xi_uv".into(),
            panels: vec![Panel::new(
                "squeezing",
                &[("xi_uv_min", Style::Dashed), ("two_mode_sum", Style::Solid)],
            )],
        },
    ];
    Ok((table, Report::text(text), figures, EXIT_OK))
}

fn run_scan(cfg: &RunConfig) -> Result<Outcome> {
    let psi = Evolver::new(cfg.params).evolve(&initial_state(cfg)?, cfg.scan_t)?;
    let sq = SqueezeMoments::new(&crate::algebra::OperatorCache::new(cfg.total_n), &psi)?;
    let points = cfg
        .squeeze
        .phi_scan
        .points
        .max(cfg.squeeze.alpha_scan.points);
    let mut table = Table::new([
        "angle",
        "xi_phi",
        "xi_uv",
        "xi_plus_sq",
        "xi_minus_sq",
        "two_mode_sum",
        "xi_phi_defined",
        "xi_uv_defined",
        "two_mode_defined",
    ]);
    // xi_phi has period pi in phi, the U-V quantities period pi in alpha
    for i in 0..points {
        let a = std::f64::consts::PI * i as f64 / points as f64;
        let phi = sq.xi_phi(Angle::Fixed(a));
        let uv = sq.xi_uv(Angle::Fixed(a));
        let pm = sq.xi_pm(Angle::Fixed(a));
        let v = |x: f64, ok: bool| Cell::Num(if ok { x } else { f64::NAN });
        table.push(vec![
            Cell::Num(a),
            v(phi.value, phi.defined),
            v(uv.value, uv.defined),
            v(pm.plus_sq, pm.defined),
            v(pm.minus_sq, pm.defined),
            v(pm.sum, pm.defined),
            Cell::Bool(phi.defined),
            Cell::Bool(uv.defined),
            Cell::Bool(pm.defined),
        ]);
    }
    let mut text = String::new();
    let _ = writeln!(
        text,
        "angle scan of N = {} at t = {}",
        cfg.total_n, cfg.scan_t
    );
    let best = [
        ("xi_phi", sq.xi_phi(Angle::Optimize(cfg.squeeze.phi_scan))),
        ("xi_uv", sq.xi_uv(Angle::Optimize(cfg.squeeze.alpha_scan))),
    ];
    for (name, s) in best {
        if s.defined {
            let _ = writeln!(
                text,
                "  min {name} = {:.9} at angle {:.6}",
                s.value, s.angle
            );
        } else {
            let _ = writeln!(
                text,
                "  {name} undefined (<Y> or the transverse spin vanishes)"
            );
        }
    }
    let figures = vec![Figure {
        name: "angle_scan".into(),
        panels: vec![
            Panel::new("xi_phi", &[("xi_phi", Style::Solid)]),
            Panel::new(
                "U-V",
                &[("xi_uv", Style::Dashed), ("two_mode_sum", Style::Solid)],
            ),
        ],
    }];
    Ok((table, Report::text(text), figures, EXIT_OK))
}

fn run_stationary(cfg: &RunConfig) -> Result<Outcome> {
    let Some(StateConfig::Coherent(spec)) = &cfg.state else {
        unreachable!("checked by check_command")
    };
    let e = eta(spec);
    let psi0 = coherent_state(spec)?;
    let observers = [
        Observer::Population(Mode::Minus),
        Observer::Population(Mode::Zero),
        Observer::Population(Mode::Plus),
    ];
    let ts = time_series(&psi0, &cfg.params, &cfg.grid, &observers)?;
    let mut table = Table::from_series(&ts);
    table.columns.push("max_drift".into());
    let mut drift = 0.0f64;
    for (i, row) in table.rows.iter_mut().enumerate() {
        let d = ts
            .columns
            .iter()
            .map(|c| (c.values[i] - c.values[0]).abs())
            .fold(0.0, f64::max);
        drift = drift.max(d);
        row.push(Cell::Num(d));
    }
    let mut text = String::new();
    let _ = writeln!(text, "coherent state, N = {}", cfg.total_n);
    let _ = writeln!(text, "  {e}");
    let _ = writeln!(
        text,
        "  max population drift over t in [{}, {}] = {drift:.3e}",
        cfg.grid.t_start(),
        cfg.grid.t_stop()
    );
    let figures = vec![Figure {
        name: "populations".into(),
        panels: vec![Panel::new(
            "populations",
            &[
                ("n_minus", Style::Solid),
                ("n_zero", Style::Solid),
                ("n_plus", Style::Dashed),
            ],
        )],
    }];
    Ok((table, Report::text(text), figures, EXIT_OK))
}

fn run_validate(cfg: &RunConfig, seed: u64) -> Result<Outcome> {
    let r = run_suite(cfg.total_n, cfg.validate_draws, seed)?;
    let report = Report {
        text: format!("{r}\n"),
        extra_csv: None,
        validation_failed: !r.passed(),
    };
    Ok((r.table(), report, Vec::new(), EXIT_OK))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::parse(text).unwrap()
    }

    #[test]
    fn evolve_columns_and_first_row() {
        let c = cfg("N = 10\nstate.kind = fock\nstate.n_minus = 0\nstate.n_zero = 10\nstate.n_plus = 0\ntime.steps = 4\n");
        let out = run(Command::Evolve, &c, 0).unwrap();
        let csv = out.artifact("evolve.csv").unwrap();
        let header = csv.lines().next().unwrap();
        assert!(header.starts_with(
            "t,n_minus,n_zero,n_plus,Y,T3,xi_phi_fixed,xi_phi_min,phi_min,xi_uv_fixed,xi_uv_min,alpha_min,xi_plus_sq,xi_minus_sq,two_mode_sum,"
        ));
        assert!(header.contains("xi_uv_min_defined"));
        assert_eq!(csv.lines().count(), 6);
        // |0,N,0> has no transverse spin, so xi_phi is undefined
        let row0: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row0[6], "nan");
        assert!(out.artifact("evolve_report.txt").is_some());
    }

    #[test]
    fn stationary_needs_coherent_state() {
        let c = cfg(
            "N = 10\nstate.kind = fock\nstate.n_minus = 0\nstate.n_zero = 10\nstate.n_plus = 0\n",
        );
        let e = run(Command::Stationary, &c, 0).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_CONFIG);
        let e = run(Command::Evolve, &cfg("N = 10\n"), 0).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_CONFIG);
    }

    #[test]
    fn cap_exceeded_is_numerical() {
        let c = cfg("N = 70\nparams.alpha = 0.1\nstate.kind = fock\nstate.n_minus = 0\nstate.n_zero = 70\nstate.n_plus = 0\ntime.steps = 2\n");
        let e = run(Command::Evolve, &c, 0).unwrap_err();
        assert!(matches!(e, Error::Resource { .. }));
        assert_eq!(exit_code(&e), EXIT_NUMERICAL);
    }

    #[test]
    fn ground_summary_and_plot() {
        let c = cfg("N = 20\noutput.plot_script = true\n");
        let out = run(Command::Ground, &c, 0).unwrap();
        assert!(out.artifact("ground_summary.csv").is_some());
        let gp = out.artifact("ground.gp").unwrap();
        assert!(gp.contains("column('gaussian')"));
    }

    #[test]
    fn scan_has_one_row_per_angle() {
        let c = cfg("N = 8\nstate.kind = coherent\nstate.P0 = 1/3\nstate.theta = pi/2\nscan.phi_points = 12\nscan.alpha_points = 12\nscan.t = 0.3\n");
        let out = run(Command::Scan, &c, 0).unwrap();
        assert_eq!(out.artifact("scan.csv").unwrap().lines().count(), 13);
    }
}
