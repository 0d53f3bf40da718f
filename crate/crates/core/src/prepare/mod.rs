//! Initial states: Fock, Raman-coherent and collective angular-momentum states.

mod angular;
mod glmk;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{BlockKey, Mode, ModeOccupation, Scope, StateVector};

pub use angular::{
    angular_basis, angular_projection, angular_state, coherent_angular_amplitude, AngularMethod,
};
pub use glmk::{
    glmk, glmk_top, glmk_top_asymptotic, glmk_vector, glmk_with, GlmkMethod, EXACT_GLMK_MAX_N,
};

pub(crate) use glmk::LnFactorial;

/// Tolerance on `|a-|^2 + |a0|^2 + |a+|^2 = 1`.
pub const ALPHA_NORM_TOL: f64 = 1e-12;
/// Tolerance on `|eta - 1|` for stationarity.
pub const STATIONARY_TOL: f64 = 1e-12;

/// A single Fock state in its `(N, m)` block.
pub fn fock_state(occ: ModeOccupation) -> StateVector {
    StateVector::basis_state(&occ)
}

/// Product state `(a-* a-^dag + a0* a0^dag + a+* a+^dag)^N |vac> / sqrt(N!)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSpec {
    pub total_n: u32,
    /// Indexed by [`Mode::index`]: `(a-, a0, a+)`.
    pub alphas: [Complex64; 3],
}

impl CoherentSpec {
    pub fn new(total_n: u32, alphas: [Complex64; 3]) -> Result<Self> {
        let spec = Self { total_n, alphas };
        spec.validate()?;
        Ok(spec)
    }

    /// From populations `P_j = |a_j|^2` and phases `delta_j`, both ordered `(-, 0, +)`.
    pub fn from_polar(total_n: u32, populations: [f64; 3], phases: [f64; 3]) -> Result<Self> {
        if populations.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::contract("populations must be non-negative"));
        }
        let alphas = [0, 1, 2].map(|j| Complex64::from_polar(populations[j].sqrt(), phases[j]));
        Self::new(total_n, alphas)
    }

    /// `a0 = sqrt(P0) e^{i theta/2}`, `a+- = sqrt((1 - P0)/2)`.
    pub fn from_p0_theta(total_n: u32, p0: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::contract(format!("P0 = {p0} outside [0, 1]")));
        }
        let side = Complex64::new(((1.0 - p0) / 2.0).sqrt(), 0.0);
        Self::new(
            total_n,
            [side, Complex64::from_polar(p0.sqrt(), theta / 2.0), side],
        )
    }

    /// The stationary family `a+- = 1/2`, `a0 = 1/sqrt2` with all phases zero.
    pub fn stationary_polar(total_n: u32) -> Self {
        let h = Complex64::new(0.5, 0.0);
        Self {
            total_n,
            alphas: [h, Complex64::new(0.5f64.sqrt(), 0.0), h],
        }
    }

    pub fn alpha(&self, mode: Mode) -> Complex64 {
        self.alphas[mode.index()]
    }

    pub fn validate(&self) -> Result<()> {
        let norm: f64 = self.alphas.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > ALPHA_NORM_TOL {
            return Err(Error::contract(format!(
                "coherent amplitudes have sum |alpha|^2 = {norm}, expected 1"
            )));
        }
        Ok(())
    }
}

/// Multinomial amplitudes over the full basis of `spec.total_n` atoms.
pub fn coherent_state(spec: &CoherentSpec) -> Result<StateVector> {
    spec.validate()?;
    let n = spec.total_n;
    let lnf = LnFactorial::new(n);
    let scope = Scope::Full { total_n: n };
    let ln_mag = spec.alphas.map(|a| a.norm().ln());
    let phase = spec.alphas.map(|a| a.arg());
    let amps = scope
        .states()
        .map(|occ| {
            let counts = occ.as_array();
            if (0..3).any(|j| counts[j] > 0 && spec.alphas[j].norm() == 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            let mut ln = 0.5 * lnf.ln_fact(n);
            let mut arg = 0.0;
            for j in 0..3 {
                if counts[j] > 0 {
                    ln += counts[j] as f64 * ln_mag[j] - 0.5 * lnf.ln_fact(counts[j]);
                    arg += counts[j] as f64 * phase[j];
                }
            }
            Complex64::from_polar(ln.exp(), arg)
        })
        .collect();
    StateVector::normalized(scope, amps)
}

/// `eta = a0^2 / (2 a- a+)`; a coherent state is an energy eigenstate iff `eta = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaReport {
    /// `None` when `a-` or `a+` vanishes.
    pub eta: Option<Complex64>,
    pub stationary: bool,
}

impl EtaReport {
    pub fn is_defined(&self) -> bool {
        self.eta.is_some()
    }
}

impl fmt::Display for EtaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.eta {
            Some(e) => write!(
                f,
                "eta = {:.12} {:+.12}i (|eta| = {:.12}, arg/pi = {:.12}); {}",
                e.re,
                e.im,
                e.norm(),
                e.arg() / PI,
                if self.stationary {
                    "stationary"
                } else {
                    "not stationary"
                }
            ),
            None => write!(f, "eta undefined (a- or a+ vanishes); not stationary"),
        }
    }
}

pub fn eta(spec: &CoherentSpec) -> EtaReport {
    let den = 2.0 * spec.alpha(Mode::Minus) * spec.alpha(Mode::Plus);
    if den.norm() == 0.0 {
        return EtaReport {
            eta: None,
            stationary: false,
        };
    }
    let e = spec.alpha(Mode::Zero).powu(2) / den;
    EtaReport {
        eta: Some(e),
        stationary: (e - 1.0).norm() <= STATIONARY_TOL,
    }
}

/// Quantum numbers of `|l, m>` for `N` atoms: `|m| <= l <= N`, `l = N (mod 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngularLabel {
    pub total_n: u32,
    pub l: u32,
    pub m: i32,
}

impl AngularLabel {
    pub fn new(total_n: u32, l: u32, m: i32) -> Result<Self> {
        if l > total_n || m.unsigned_abs() > l || !(total_n - l).is_multiple_of(2) {
            return Err(Error::contract(format!(
                "invalid angular label N={total_n}, l={l}, m={m}: need |m| <= l <= N and l = N mod 2"
            )));
        }
        Ok(Self { total_n, l, m })
    }

    pub fn block_key(&self) -> BlockKey {
        BlockKey::new(self.total_n, self.m)
    }

    /// Admissible `l` for block `(N, m)`, ascending.
    pub fn ls(key: BlockKey) -> impl Iterator<Item = u32> {
        let lo = key.magnetization.unsigned_abs();
        let lo = lo + (key.total_n - lo) % 2;
        (lo..=key.total_n).step_by(2)
    }
}

impl fmt::Display for AngularLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|l={}, m={}> (N={})", self.l, self.m, self.total_n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_coherent_states() {
        let s = CoherentSpec::new(1, [c(0., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let psi = coherent_state(&s).unwrap();
        assert_eq!(psi.amplitude(&ModeOccupation::new(0, 1, 0)), c(1.0, 0.0));
        let s = CoherentSpec::new(2, [c(0., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let psi = coherent_state(&s).unwrap();
        assert_eq!(psi.amplitude(&ModeOccupation::new(0, 2, 0)), c(1.0, 0.0));
    }

    #[test]
    fn rejects_unnormalized_spec() {
        assert!(CoherentSpec::new(3, [c(0.5, 0.), c(0.5, 0.), c(0.5, 0.)]).is_err());
    }

    #[test]
    fn populations_are_binomial_means() {
        let spec = CoherentSpec::from_polar(100, [0.2, 0.5, 0.3], [0.3, -1.0, 2.0]).unwrap();
        let psi = coherent_state(&spec).unwrap();
        let mut means = [0.0; 3];
        for (occ, a) in psi.iter() {
            for (j, n) in occ.as_array().iter().enumerate() {
                means[j] += *n as f64 * a.norm_sqr();
            }
        }
        for (m, p) in means.iter().zip([20.0, 50.0, 30.0]) {
            assert!((m - p).abs() < 1e-9);
        }
    }

    #[test]
    fn eta_cases() {
        let r = eta(&CoherentSpec::stationary_polar(10));
        assert!(r.stationary);
        let r = eta(&CoherentSpec::from_p0_theta(100, 1.0 / 3.0, PI / 2.0).unwrap());
        let e = r.eta.unwrap();
        assert!((e - c(0.0, 0.5)).norm() < 1e-15);
        assert!(!r.stationary);
        let r = eta(&CoherentSpec::new(4, [c(0.6, 0.), c(0., 0.), c(0.8, 0.)]).unwrap());
        assert_eq!(r.eta, Some(c(0.0, 0.0)));
        assert!(!r.stationary);
        let r = eta(&CoherentSpec::new(4, [c(0., 0.), c(0.6, 0.), c(0.8, 0.)]).unwrap());
        assert!(!r.is_defined() && !r.stationary);
    }

    #[test]
    fn admissible_ls() {
        let ls: Vec<u32> = AngularLabel::ls(BlockKey::new(5, 2)).collect();
        assert_eq!(ls, vec![3, 5]);
        let ls: Vec<u32> = AngularLabel::ls(BlockKey::new(4, 0)).collect();
        assert_eq!(ls, vec![0, 2, 4]);
        assert_eq!(
            AngularLabel::ls(BlockKey::new(7, -3)).count(),
            BlockKey::new(7, -3).dim()
        );
    }
}
