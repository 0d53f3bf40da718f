//! Spectral time evolution: diagonalize each block once, then apply phases.

mod eigen;
mod series;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use crate::algebra::{hamiltonian_full, hamiltonian_tridiagonal, ModelParams};
use crate::error::{Error, Result};
use crate::fock::{BlockKey, Scope, StateVector};
use crate::prepare::angular_basis;

pub use eigen::{
    diagonalize_block, diagonalize_dense, diagonalize_tridiagonal, tridiagonal_ql, EigenSystem,
};
pub use series::{time_series, Column, Observer, TimeSeries};

/// Largest atom number accepted by [`evolve_oracle_angular`].
pub const ORACLE_MAX_N: u32 = 40;
/// Default evolution window: one revival period at `lambda_a = -1`.
pub const DEFAULT_STEPS: usize = 512;

/// Uniform grid `t_start, ..., t_stop` with `steps + 1` points, in units of
/// `hbar/|lambda_a|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_stop: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_stop: f64, steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_stop.is_finite()) || t_stop <= t_start {
            return Err(Error::contract(format!(
                "time grid needs t_stop > t_start (got {t_start} .. {t_stop})"
            )));
        }
        if steps == 0 {
            return Err(Error::contract("time grid needs at least one step"));
        }
        Ok(Self {
            t_start,
            t_stop,
            steps,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_stop(&self) -> f64 {
        self.t_stop
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        if i == self.steps {
            return self.t_stop;
        }
        self.t_start + (self.t_stop - self.t_start) * i as f64 / self.steps as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_start: 0.0,
            t_stop: PI,
            steps: DEFAULT_STEPS,
        }
    }
}

/// One diagonalized piece of a state: amplitudes at `offset..offset + dim`.
#[derive(Debug, Clone)]
struct Part {
    offset: usize,
    system: Arc<EigenSystem>,
    coeffs: Vec<Complex64>,
}

/// A state expanded in energy eigenvectors, ready to be evaluated at any time.
#[derive(Debug, Clone)]
pub struct Spectral {
    scope: Scope,
    parts: Vec<Part>,
}

impl Spectral {
    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn at(&self, t: f64) -> StateVector {
        let mut out = vec![Complex64::new(0.0, 0.0); self.scope.dim()];
        for part in &self.parts {
            let v = &part.system.eigenvectors;
            let phased: Vec<Complex64> = part
                .coeffs
                .iter()
                .zip(&part.system.eigenvalues)
                .map(|(c, e)| c * Complex64::from_polar(1.0, -e * t))
                .collect();
            for (i, slot) in out[part.offset..part.offset + v.nrows()]
                .iter_mut()
                .enumerate()
            {
                *slot = phased.iter().enumerate().map(|(k, c)| c * v[(i, k)]).sum();
            }
        }
        StateVector::from_raw(self.scope, out)
    }
}

/// Evolves states under one set of couplings, caching eigensystems per block.
#[derive(Debug)]
pub struct Evolver {
    params: ModelParams,
    blocks: RwLock<HashMap<BlockKey, Arc<EigenSystem>>>,
    full: RwLock<HashMap<u32, Arc<EigenSystem>>>,
}

impl Evolver {
    pub fn new(params: ModelParams) -> Self {
        Self {
            params,
            blocks: RwLock::new(HashMap::new()),
            full: RwLock::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn block_eigensystem(&self, key: BlockKey) -> Result<Arc<EigenSystem>> {
        if let Some(es) = self.blocks.read().expect("eigen cache").get(&key) {
            return Ok(es.clone());
        }
        if key.is_empty() {
            return Err(Error::EmptyBlock {
                n: key.total_n,
                m: key.magnetization,
            });
        }
        let t = hamiltonian_tridiagonal(&self.params, key)?;
        let es = Arc::new(diagonalize_tridiagonal(&t, key)?);
        Ok(self
            .blocks
            .write()
            .expect("eigen cache")
            .entry(key)
            .or_insert(es)
            .clone())
    }

    /// Dense eigensystem of the full-basis Hamiltonian (magnetic terms active).
    pub fn full_eigensystem(&self, total_n: u32) -> Result<Arc<EigenSystem>> {
        if let Some(es) = self.full.read().expect("eigen cache").get(&total_n) {
            return Ok(es.clone());
        }
        let h = hamiltonian_full(&self.params, total_n)?;
        let es = Arc::new(diagonalize_dense(&h)?);
        Ok(self
            .full
            .write()
            .expect("eigen cache")
            .entry(total_n)
            .or_insert(es)
            .clone())
    }

    /// Expands `state` in energy eigenvectors. Block-scoped states stay block-scoped
    /// unless magnetic terms couple the blocks.
    pub fn spectral(&self, state: &StateVector) -> Result<Spectral> {
        if self.params.active_magnetic().is_some() {
            let psi = state.to_full();
            let system = self.full_eigensystem(psi.total_n())?;
            let coeffs = project(&system, psi.amplitudes());
            return Ok(Spectral {
                scope: psi.scope(),
                parts: vec![Part {
                    offset: 0,
                    system,
                    coeffs,
                }],
            });
        }
        let scope = state.scope();
        let mut parts = Vec::new();
        for key in scope.blocks() {
            let amps = state.block(&key).expect("block of own scope");
            if amps.iter().all(|a| a.norm_sqr() == 0.0) {
                continue;
            }
            let system = self.block_eigensystem(key)?;
            let coeffs = project(&system, amps);
            parts.push(Part {
                offset: scope.block_offset(&key).expect("block of own scope"),
                system,
                coeffs,
            });
        }
        Ok(Spectral { scope, parts })
    }

    pub fn evolve(&self, state: &StateVector, t: f64) -> Result<StateVector> {
        Ok(self.spectral(state)?.at(t))
    }
}

fn project(system: &EigenSystem, amps: &[Complex64]) -> Vec<Complex64> {
    let v = &system.eigenvectors;
    (0..v.ncols())
        .map(|k| (0..v.nrows()).map(|i| amps[i] * v[(i, k)]).sum())
        .collect()
}

/// `|psi(t)> = exp(-i H t)|psi>`.
pub fn evolve(state: &StateVector, params: &ModelParams, t: f64) -> Result<StateVector> {
    Evolver::new(*params).evolve(state, t)
}

/// Independent evolution through the angular-momentum basis: project on
/// numerically obtained `|l, m>`, attach `exp(-i E(l) t)`, reconstruct.
pub fn evolve_oracle_angular(
    state: &StateVector,
    params: &ModelParams,
    t: f64,
) -> Result<StateVector> {
    let n = state.total_n();
    if n > ORACLE_MAX_N {
        return Err(Error::contract(format!(
            "angular oracle limited to N <= {ORACLE_MAX_N}, got {n}"
        )));
    }
    if params.active_magnetic().is_some() {
        return Err(Error::contract("angular oracle has no magnetic terms"));
    }
    let scope = state.scope();
    let mut out = vec![Complex64::new(0.0, 0.0); scope.dim()];
    for key in scope.blocks() {
        let amps = state.block(&key).expect("block of own scope");
        let offset = scope.block_offset(&key).expect("block of own scope");
        for (l, v) in angular_basis(key)? {
            let c: Complex64 = v.iter().zip(amps).map(|(g, a)| *g * a).sum();
            let c = c * Complex64::from_polar(1.0, -params.energy(n, l) * t);
            for (i, g) in v.iter().enumerate() {
                out[offset + i] += c * *g;
            }
        }
    }
    Ok(StateVector::from_raw(scope, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MagneticParams;
    use crate::fock::ModeOccupation;
    use crate::prepare::{coherent_state, CoherentSpec};

    #[test]
    fn grid_points() {
        let g = TimeGrid::new(0.0, PI, 4).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.point(4), PI);
        assert!(TimeGrid::new(1.0, 1.0, 3).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn zero_time_is_identity() {
        let spec = CoherentSpec::from_polar(9, [0.2, 0.3, 0.5], [0.1, 0.2, 0.3]).unwrap();
        let psi = coherent_state(&spec).unwrap();
        let out = evolve(&psi, &ModelParams::default(), 0.0).unwrap();
        for (a, b) in psi.amplitudes().iter().zip(out.amplitudes()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn agrees_with_oracle_and_revives() {
        let p = ModelParams {
            lambda_a: -1.0,
            lambda_s: 0.3,
            mu: -0.2,
            magnetic: None,
        };
        let spec = CoherentSpec::from_polar(12, [0.25, 0.4, 0.35], [0.5, -0.3, 1.2]).unwrap();
        let psi = coherent_state(&spec).unwrap();
        let ev = Evolver::new(p);
        for t in [0.1, 1.0, PI] {
            let a = ev.evolve(&psi, t).unwrap();
            let b = evolve_oracle_angular(&psi, &p, t).unwrap();
            assert!(1.0 - a.overlap(&b).unwrap() < 1e-10);
            assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        }
        let back = evolve(&psi, &ModelParams::default(), PI).unwrap();
        assert!(psi.overlap(&back).unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn block_state_stays_in_block() {
        let psi = StateVector::basis_state(&ModeOccupation::new(2, 5, 3));
        let out = evolve(&psi, &ModelParams::default(), 0.7).unwrap();
        assert_eq!(out.scope(), psi.scope());
    }

    #[test]
    fn magnetic_evolution_uses_full_basis() {
        let p = ModelParams {
            magnetic: Some(MagneticParams {
                alpha: 0.3,
                beta: 0.1,
                gamma: 0.2,
            }),
            ..ModelParams::default()
        };
        let psi = StateVector::basis_state(&ModeOccupation::new(1, 2, 1));
        let out = evolve(&psi, &p, 0.5).unwrap();
        assert_eq!(out.scope(), Scope::Full { total_n: 4 });
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        // the T+ coupling moves weight out of the m = 0 block
        let m0: f64 = out
            .block(&BlockKey::new(4, 0))
            .unwrap()
            .iter()
            .map(|a| a.norm_sqr())
            .sum();
        assert!(m0 < 1.0 - 1e-3);
    }
}
