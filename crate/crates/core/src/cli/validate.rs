//! The oracle and identity suite behind `spinorsim validate`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::output::{Cell, Table};
use crate::algebra::{
    hamiltonian_tridiagonal, verify_identities, ModelParams, OperatorCache, MAX_IDENTITY_N,
};
use crate::error::Result;
use crate::evolve::{diagonalize_tridiagonal, evolve_oracle_angular, Evolver, ORACLE_MAX_N};
use crate::fock::{BlockKey, Scope, StateVector};
use crate::prepare::{
    angular_projection, angular_state, coherent_angular_amplitude, coherent_state, glmk_top,
    glmk_top_asymptotic, glmk_vector, AngularLabel, AngularMethod, CoherentSpec, GlmkMethod,
};
use crate::squeeze::SqueezeMoments;

const SPECTRUM_REL_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-8;
const REVIVAL_TOL: f64 = 1e-9;
const QUADRATURE_TOL: f64 = 1e-10;
const BOUND_TOL: f64 = 1e-9;
const AMPLITUDE_TOL: f64 = 1e-12;
const GLMK_TOL: f64 = 1e-10;

const QUADRATURE_N: u32 = 12;
const AMPLITUDE_N: u32 = 10;
const GLMK_N: u32 = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(["check", "value", "tolerance", "pass"]);
        for c in &self.checks {
            t.push(vec![
                Cell::Text(c.name.clone()),
                Cell::Num(c.value),
                Cell::Num(c.tolerance),
                Cell::Bool(c.passed),
            ]);
        }
        t
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "validation suite (seed {})", self.seed)?;
        writeln!(f, "  {:<52} {:>12} {:>10}  result", "check", "value", "tol")?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<52} {:>12.3e} {:>10.1e}  {}",
                c.name,
                c.value,
                c.tolerance,
                if c.passed { "pass" } else { "FAIL" }
            )?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Random coherent spec with every population bounded away from zero.
pub fn random_coherent(total_n: u32, rng: &mut impl Rng) -> CoherentSpec {
    let w: [f64; 3] = [(); 3].map(|_| rng.gen_range(0.05..1.0));
    let s: f64 = w.iter().sum();
    let phases = [(); 3].map(|_| rng.gen_range(0.0..2.0 * PI));
    CoherentSpec::from_polar(total_n, w.map(|x| x / s), phases).expect("normalized by construction")
}

/// Random normalized state on the full basis.
pub fn random_state(total_n: u32, rng: &mut impl Rng) -> StateVector {
    let scope = Scope::Full { total_n };
    let amps = (0..scope.dim())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(scope, amps).expect("nonzero by construction")
}

/// Runs the suite at sizes capped by `total_n`; `draws` random states per
/// randomized check, drawn from `seed`.
pub fn run_suite(total_n: u32, draws: usize, seed: u64) -> Result<ValidationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let mut sizes = vec![1, 2, 3, total_n.min(MAX_IDENTITY_N)];
    sizes.retain(|&n| n <= total_n);
    sizes.dedup();
    for n in sizes {
        let r = verify_identities(n)?;
        let worst = r
            .checks
            .iter()
            .filter(|c| c.expected)
            .map(|c| c.deviation / c.tolerance)
            .fold(0.0, f64::max);
        checks.push(Check {
            name: format!("identities N={n} (worst deviation / tolerance)"),
            value: worst,
            tolerance: 1.0,
            passed: r.all_as_expected(),
        });
    }

    let p = ModelParams {
        lambda_a: -1.0,
        lambda_s: 0.17,
        mu: 0.4,
        magnetic: None,
    };
    let mut worst = 0.0f64;
    for n in 0..=total_n.min(ORACLE_MAX_N) {
        for m in -(n as i32)..=n as i32 {
            let key = BlockKey::new(n, m);
            let es = diagonalize_tridiagonal(&hamiltonian_tridiagonal(&p, key)?, key)?;
            let mut law: Vec<f64> = AngularLabel::ls(key).map(|l| p.energy(n, l)).collect();
            law.sort_by(f64::total_cmp);
            for (a, b) in es.eigenvalues.iter().zip(&law) {
                worst = worst.max((a - b).abs() / b.abs().max(1.0));
            }
        }
    }
    checks.push(Check::at_most(
        format!("spectrum law N<={}", total_n.min(ORACLE_MAX_N)),
        worst,
        SPECTRUM_REL_TOL,
    ));

    let n_oracle = total_n.min(ORACLE_MAX_N);
    let ev = Evolver::new(p);
    let mut deficit = 0.0f64;
    for _ in 0..draws {
        let psi = coherent_state(&random_coherent(n_oracle, &mut rng))?;
        let spectral = ev.spectral(&psi)?;
        for t in [0.1, 1.0, PI] {
            let a = spectral.at(t);
            let b = evolve_oracle_angular(&psi, &p, t)?;
            deficit = deficit.max(1.0 - a.overlap(&b)?);
        }
    }
    checks.push(Check::at_most(
        format!("spectral vs angular evolution N={n_oracle}, {draws} states"),
        deficit,
        ORACLE_TOL,
    ));

    let psi = coherent_state(&random_coherent(n_oracle, &mut rng))?;
    let back = Evolver::new(ModelParams::default()).evolve(&psi, PI)?;
    checks.push(Check::at_most(
        format!("revival at t=pi, N={n_oracle} (1 - overlap)"),
        1.0 - psi.overlap(&back)?,
        REVIVAL_TOL,
    ));

    let nq = total_n.min(QUADRATURE_N);
    let cache = OperatorCache::new(nq);
    let (mut residual, mut slack) = (0.0f64, f64::INFINITY);
    for _ in 0..draws {
        let m = SqueezeMoments::new(&cache, &random_state(nq, &mut rng))?;
        let alpha = rng.gen_range(0.0..PI);
        residual = residual.max(m.quadrature_stats(alpha).identity_residual().abs());
        slack = slack.min(m.bound_slack(alpha));
    }
    checks.push(Check::at_most(
        format!("quadrature identity N={nq}"),
        residual,
        QUADRATURE_TOL,
    ));
    checks.push(Check::at_most(
        format!("uncertainty bound N={nq} (negated slack)"),
        -slack,
        BOUND_TOL,
    ));

    let na = total_n.min(AMPLITUDE_N);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let spec = random_coherent(na, &mut rng);
        for ((l, m), amp) in angular_projection(&coherent_state(&spec)?)? {
            let label = AngularLabel::new(na, l, m)?;
            worst = worst.max((coherent_angular_amplitude(&spec, label)? - amp).norm());
        }
    }
    checks.push(Check::at_most(
        format!("coherent angular amplitudes N={na}"),
        worst,
        AMPLITUDE_TOL,
    ));

    let ng = total_n.min(GLMK_N);
    let (mut overlap_deficit, mut orth) = (0.0f64, 0.0f64);
    for m in -(ng as i32)..=ng as i32 {
        let key = BlockKey::new(ng, m);
        let top = glmk_vector(AngularLabel::new(ng, ng, m)?, GlmkMethod::Auto)?;
        for l in AngularLabel::ls(key) {
            let label = AngularLabel::new(ng, l, m)?;
            let analytic = angular_state(label, AngularMethod::Analytic(GlmkMethod::Auto))?;
            let numeric = angular_state(label, AngularMethod::Numeric)?;
            overlap_deficit = overlap_deficit.max(1.0 - analytic.overlap(&numeric)?);
            let g = glmk_vector(label, GlmkMethod::Auto)?;
            let dot: f64 = g.iter().zip(&top).map(|(a, b)| a * b).sum();
            let delta = if l == ng { 1.0 } else { 0.0 };
            orth = orth.max((dot.abs() - delta).abs());
        }
    }
    checks.push(Check::at_most(
        format!("G_lmk analytic vs L^2 eigenvectors N={ng}"),
        overlap_deficit,
        GLMK_TOL,
    ));
    checks.push(Check::at_most(
        format!("sum_k G_Nmk G_lmk = delta_Nl, N={ng}"),
        orth,
        GLMK_TOL,
    ));

    // both vectors are unit-normalized, so the l2 distance is a relative error
    let dist = |n: u32| -> Result<f64> {
        let mut sq = 0.0;
        for n0 in (0..=n).step_by(2) {
            sq += (glmk_top_asymptotic(n, n0) - glmk_top(n, 0, n0)?).powi(2);
        }
        Ok(sq.sqrt())
    };
    let (e100, e1000) = (dist(100)?, dist(1000)?);
    checks.push(Check {
        name: "G_N0k asymptotic l2 error, ratio N=1000 / N=100".into(),
        value: e1000 / e100,
        tolerance: 1.0,
        passed: e1000 < e100,
    });

    Ok(ValidationReport { seed, checks })
}
