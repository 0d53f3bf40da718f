//! Expectation values, variances and covariances.
//!
//! Covariances are `<AB> - <A><B>` without symmetrization, so they are complex
//! in general and `A`, `B` need not be Hermitian.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;

use super::kind::OperatorKind;
use super::matrix::{operator_on, OperatorMatrix};
use crate::error::{Error, Result};
use crate::fock::{Scope, StateVector};

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check(cond: bool, what: &str, op: &OperatorMatrix, scope: Scope) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::contract(format!(
            "{what}: operator {:?} -> {:?} does not act within {:?}",
            op.source(),
            op.target(),
            scope
        )))
    }
}

/// `<psi|A|psi>`
pub fn expectation(state: &StateVector, a: &OperatorMatrix) -> Result<Complex64> {
    let scope = state.scope();
    check(
        a.source() == scope && a.target() == scope,
        "expectation",
        a,
        scope,
    )?;
    Ok(dot(state.amplitudes(), &a.apply(state.amplitudes())))
}

/// `<psi|A B|psi>`; the intermediate `B|psi>` may leave the state's scope.
pub fn second_moment(
    state: &StateVector,
    a: &OperatorMatrix,
    b: &OperatorMatrix,
) -> Result<Complex64> {
    let scope = state.scope();
    check(b.source() == scope, "second moment", b, scope)?;
    check(
        a.source() == b.target() && a.target() == scope,
        "second moment",
        a,
        scope,
    )?;
    let bpsi = b.apply(state.amplitudes());
    Ok(dot(state.amplitudes(), &a.apply(&bpsi)))
}

/// `<AB> - <A><B>`
pub fn covariance(
    state: &StateVector,
    a: &OperatorMatrix,
    b: &OperatorMatrix,
) -> Result<Complex64> {
    Ok(second_moment(state, a, b)? - expectation(state, a)? * expectation(state, b)?)
}

/// `<A^2> - <A>^2` (real part; exact for Hermitian `A`).
pub fn variance(state: &StateVector, a: &OperatorMatrix) -> Result<f64> {
    Ok(covariance(state, a, a)?.re)
}

/// Full-scope operator matrices for one atom number, built on first use.
#[derive(Debug)]
pub struct OperatorCache {
    scope: Scope,
    ops: RwLock<HashMap<OperatorKind, Arc<OperatorMatrix>>>,
}

impl OperatorCache {
    pub fn new(total_n: u32) -> Self {
        Self {
            scope: Scope::Full { total_n },
            ops: RwLock::new(HashMap::new()),
        }
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    /// Operators whose atom number changes are not cached here.
    pub fn get(&self, kind: OperatorKind) -> Result<Arc<OperatorMatrix>> {
        if let Some(op) = self.ops.read().expect("cache lock").get(&kind) {
            return Ok(op.clone());
        }
        if kind.block_displacement().is_some_and(|(dn, _)| dn != 0) {
            return Err(Error::contract(format!(
                "{kind} changes the atom number; build it with operator_on"
            )));
        }
        let op = Arc::new(operator_on(kind, self.scope)?);
        self.ops
            .write()
            .expect("cache lock")
            .entry(kind)
            .or_insert_with(|| op.clone());
        Ok(op)
    }
}

/// Moments of symbolic operators on one state, evaluated in the full space.
///
/// Block-scoped states are embedded first, so block-changing operators such as
/// `V_plus` have well-defined (zero) means on Fock states.
pub struct KindMoments<'a> {
    cache: &'a OperatorCache,
    psi: StateVector,
}

impl<'a> KindMoments<'a> {
    pub fn new(cache: &'a OperatorCache, state: &StateVector) -> Result<Self> {
        if state.total_n() != cache.scope().total_n() {
            return Err(Error::contract(format!(
                "state has N={} but the operator cache was built for N={}",
                state.total_n(),
                cache.scope().total_n()
            )));
        }
        Ok(Self {
            cache,
            psi: state.to_full(),
        })
    }

    pub fn state(&self) -> &StateVector {
        &self.psi
    }

    pub fn apply(&self, kind: OperatorKind) -> Result<Vec<Complex64>> {
        Ok(self.cache.get(kind)?.apply(self.psi.amplitudes()))
    }

    pub fn mean(&self, kind: OperatorKind) -> Result<Complex64> {
        expectation(&self.psi, &*self.cache.get(kind)?)
    }

    pub fn second(&self, a: OperatorKind, b: OperatorKind) -> Result<Complex64> {
        second_moment(&self.psi, &*self.cache.get(a)?, &*self.cache.get(b)?)
    }

    pub fn covariance(&self, a: OperatorKind, b: OperatorKind) -> Result<Complex64> {
        Ok(self.second(a, b)? - self.mean(a)? * self.mean(b)?)
    }

    pub fn variance(&self, a: OperatorKind) -> Result<f64> {
        Ok(self.covariance(a, a)?.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ModeOccupation;

    #[test]
    fn hypercharge_of_polar_fock_state() {
        let cache = OperatorCache::new(100);
        let psi = StateVector::basis_state(&ModeOccupation::new(0, 100, 0));
        let m = KindMoments::new(&cache, &psi).unwrap();
        let y = m.mean(OperatorKind::Y).unwrap();
        assert!((y.re + 200.0 / 3.0).abs() < 1e-10 && y.im == 0.0);
    }

    #[test]
    fn uv_covariance_vanishes_on_fock_state() {
        for n in [2u32, 7, 30] {
            let cache = OperatorCache::new(n);
            let psi = StateVector::basis_state(&ModeOccupation::new(0, n, 0));
            let m = KindMoments::new(&cache, &psi).unwrap();
            let c = m
                .covariance(OperatorKind::VPlus, OperatorKind::UPlus)
                .unwrap();
            assert_eq!(c, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn strict_api_rejects_block_changing_operator() {
        let psi = StateVector::basis_state(&ModeOccupation::new(1, 2, 1));
        let key = psi.scope();
        let Scope::Block(k) = key else { unreachable!() };
        let vp = crate::algebra::operator_matrix(OperatorKind::VPlus, k).unwrap();
        assert!(matches!(expectation(&psi, &vp), Err(Error::Contract(_))));
        let um = crate::algebra::operator_matrix(OperatorKind::UMinus, k).unwrap();
        // U- raises m by one and V- lowers it again
        let vm =
            crate::algebra::operator_matrix(OperatorKind::VMinus, um.target().blocks()[0]).unwrap();
        let z = second_moment(&psi, &vm, &um).unwrap();
        // V- U- = a0^dag a+ a0^dag a- : (1,2,1) -> (0,4,0), never diagonal
        assert_eq!(z, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn n_changing_tags_are_refused_by_cache() {
        let cache = OperatorCache::new(4);
        assert!(cache.get(OperatorKind::ASinglet).is_err());
        assert!(cache.get(OperatorKind::AdagA).is_ok());
    }
}
