//! Squeezing diagnostics: U-V quadratures, the two-spin and two-mode criteria
//! and rotated isospin squeezing.
//!
//! [`SqueezeMoments`] collects every first and second moment once per state;
//! all angle dependence is then closed-form, so optimizing over an angle costs
//! nothing beyond arithmetic.

mod optimize;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::algebra::{KindMoments, OperatorCache, OperatorKind};
use crate::error::Result;
use crate::fock::StateVector;

pub use optimize::{minimize_periodic, AngleScan, DEFAULT_ANGLE_TOL, DEFAULT_SCAN_POINTS};

/// Denominators below `(UNDEFINED_REL * N)^2` (or `|<Y>| < UNDEFINED_REL * N`)
/// make a squeezing parameter undefined.
pub const UNDEFINED_REL: f64 = 1e-9;
/// Squeezing thresholds.
pub const XI_UV_THRESHOLD: f64 = 0.75;
pub const TWO_MODE_THRESHOLD: f64 = 2.0;
pub const XI_PHI_THRESHOLD: f64 = 1.0;

/// A quadrature or rotation angle: fixed, or minimized over one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Fixed(f64),
    Optimize(AngleScan),
}

impl Angle {
    pub fn optimize() -> Self {
        Angle::Optimize(AngleScan::default())
    }
}

/// A squeezing value with the angle it was evaluated at. Undefined values
/// carry `NaN` and `defined = false`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeezing {
    pub value: f64,
    pub angle: f64,
    pub defined: bool,
}

impl Squeezing {
    fn undefined(angle: f64) -> Self {
        Self {
            value: f64::NAN,
            angle,
            defined: false,
        }
    }
}

/// `(xi_+^a)^2`, `(xi_-^{a+pi/2})^2` and their sum at quadrature angle `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSqueezing {
    pub plus_sq: f64,
    pub minus_sq: f64,
    pub sum: f64,
    pub alpha: f64,
    pub defined: bool,
}

/// Quadrature variances at angle `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureStats {
    pub alpha: f64,
    pub var_xu: f64,
    pub var_xv: f64,
    pub var_xu_perp: f64,
    pub var_xv_perp: f64,
    pub var_qplus: f64,
    pub var_qminus_perp: f64,
    /// `Re(e^{-2i alpha} Cov(V+, U+))`
    pub c_uv: f64,
}

impl QuadratureStats {
    /// `var Q+ + var Q-perp - [ (var_xu + var_xv + var_xu_perp + var_xv_perp)/4 + c_uv ]`,
    /// zero for every state.
    pub fn identity_residual(&self) -> f64 {
        self.var_qplus + self.var_qminus_perp
            - (0.25 * (self.var_xu + self.var_xv + self.var_xu_perp + self.var_xv_perp) + self.c_uv)
    }
}

// index order of the U/V ladder table
const UM: usize = 0;
const VM: usize = 1;
const UP: usize = 2;
const VP: usize = 3;
const UV_KINDS: [OperatorKind; 4] = [
    OperatorKind::UMinus,
    OperatorKind::VMinus,
    OperatorKind::UPlus,
    OperatorKind::VPlus,
];
const UV_ADJOINT: [usize; 4] = [UP, VP, UM, VM];

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// All moments the squeezing parameters need, for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezeMoments {
    total_n: f64,
    uv_mean: [Complex64; 4],
    /// `uv_second[a][b] = <O_a O_b>`
    uv_second: [[Complex64; 4]; 4],
    y: f64,
    tx: f64,
    ty: f64,
    t3: f64,
    tyy: f64,
    t33: f64,
    /// `Re <Ty T3>`, the symmetrized second moment
    ty3: f64,
}

impl SqueezeMoments {
    pub fn new(cache: &OperatorCache, state: &StateVector) -> Result<Self> {
        let km = KindMoments::new(cache, state)?;
        let psi = km.state().amplitudes();
        let w: Vec<Vec<Complex64>> = UV_KINDS
            .iter()
            .map(|&k| km.apply(k))
            .collect::<Result<_>>()?;
        let mut uv_mean = [Complex64::new(0.0, 0.0); 4];
        let mut uv_second = [[Complex64::new(0.0, 0.0); 4]; 4];
        for a in 0..4 {
            uv_mean[a] = dot(psi, &w[a]);
            for b in 0..4 {
                uv_second[a][b] = dot(&w[UV_ADJOINT[a]], &w[b]);
            }
        }
        let ty_psi = km.apply(OperatorKind::Ty)?;
        let t3_psi = km.apply(OperatorKind::T3)?;
        Ok(Self {
            total_n: state.total_n() as f64,
            uv_mean,
            uv_second,
            y: km.mean(OperatorKind::Y)?.re,
            tx: km.mean(OperatorKind::Tx)?.re,
            ty: dot(psi, &ty_psi).re,
            t3: dot(psi, &t3_psi).re,
            tyy: dot(&ty_psi, &ty_psi).re,
            t33: dot(&t3_psi, &t3_psi).re,
            ty3: dot(&ty_psi, &t3_psi).re,
        })
    }

    pub fn hypercharge(&self) -> f64 {
        self.y
    }

    pub fn isospin_x(&self) -> f64 {
        self.tx
    }

    /// `<J_{+-3}> = (3<Y>/2 +- <Tx>)/2`
    pub fn j3(&self) -> (f64, f64) {
        (
            0.5 * (1.5 * self.y + self.tx),
            0.5 * (1.5 * self.y - self.tx),
        )
    }

    /// `(<O_a O_b> - <O_a><O_b>)` for ladder table indices.
    fn cov(&self, a: usize, b: usize) -> Complex64 {
        self.uv_second[a][b] - self.uv_mean[a] * self.uv_mean[b]
    }

    /// Mean and variance of `sum_a w_a O_a`.
    fn quadrature(&self, w: [Complex64; 4]) -> (f64, f64) {
        let mut mean = Complex64::new(0.0, 0.0);
        let mut var = Complex64::new(0.0, 0.0);
        for a in 0..4 {
            mean += w[a] * self.uv_mean[a];
            for b in 0..4 {
                var += w[a] * w[b] * self.cov(a, b);
            }
        }
        (mean.re, var.re)
    }

    /// Weights of `x_u * X_u^a + x_v * X_v^a`.
    fn weights(alpha: f64, xu: f64, xv: f64) -> [Complex64; 4] {
        let e = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, alpha);
        let mut w = [Complex64::new(0.0, 0.0); 4];
        w[UM] = e * xu;
        w[UP] = e.conj() * xu;
        w[VM] = e * xv;
        w[VP] = e.conj() * xv;
        w
    }

    /// `Q+^a = (X_v^a + X_u^a)/2`
    fn q_plus(&self, alpha: f64) -> (f64, f64) {
        self.quadrature(Self::weights(alpha, 0.5, 0.5))
    }

    /// `Q-^a = (X_v^a - X_u^a)/2`
    fn q_minus(&self, alpha: f64) -> (f64, f64) {
        self.quadrature(Self::weights(alpha, -0.5, 0.5))
    }

    pub fn quadrature_stats(&self, alpha: f64) -> QuadratureStats {
        let var = |xu, xv, a| self.quadrature(Self::weights(a, xu, xv)).1;
        QuadratureStats {
            alpha,
            var_xu: var(1.0, 0.0, alpha),
            var_xv: var(0.0, 1.0, alpha),
            var_xu_perp: var(1.0, 0.0, alpha + FRAC_PI_2),
            var_xv_perp: var(0.0, 1.0, alpha + FRAC_PI_2),
            var_qplus: self.q_plus(alpha).1,
            var_qminus_perp: self.q_minus(alpha + FRAC_PI_2).1,
            c_uv: (Complex64::from_polar(1.0, -2.0 * alpha) * self.cov(VP, UP)).re,
        }
    }

    /// `var Q+ + var Q-perp - (3/4 |<Y>| + c_uv)`; never below zero.
    pub fn bound_slack(&self, alpha: f64) -> f64 {
        let q = self.quadrature_stats(alpha);
        q.var_qplus + q.var_qminus_perp - (0.75 * self.y.abs() + q.c_uv)
    }

    fn y_defined(&self) -> bool {
        self.y.abs() >= UNDEFINED_REL * self.total_n
    }

    fn den_defined(&self, den: f64) -> bool {
        den >= (UNDEFINED_REL * self.total_n).powi(2)
    }

    fn xi_uv_at(&self, alpha: f64) -> f64 {
        if !self.y_defined() {
            return f64::NAN;
        }
        (self.q_plus(alpha).1 + self.q_minus(alpha + FRAC_PI_2).1) / self.y.abs()
    }

    /// `[var Q+^a + var Q-^{a+pi/2}] / |<Y>|`; squeezed below 3/4.
    pub fn xi_uv(&self, alpha: Angle) -> Squeezing {
        let (a, v) = match alpha {
            Angle::Fixed(a) => (a, self.xi_uv_at(a)),
            Angle::Optimize(scan) => minimize_periodic(|a| self.xi_uv_at(a), PI, scan),
        };
        if v.is_finite() {
            Squeezing {
                value: v,
                angle: a,
                defined: true,
            }
        } else {
            Squeezing::undefined(a)
        }
    }

    fn xi_pm_at(&self, alpha: f64) -> PairSqueezing {
        let n = self.total_n;
        let (jp, jm) = self.j3();
        let var_p = self.q_plus(alpha).1;
        let mean_p = self.q_plus(alpha + FRAC_PI_2).0;
        let var_m = self.q_minus(alpha + FRAC_PI_2).1;
        let mean_m = self.q_minus(alpha + PI).0;
        let den_p = mean_p * mean_p + jp * jp;
        let den_m = mean_m * mean_m + jm * jm;
        let defined = self.den_defined(den_p) && self.den_defined(den_m);
        let (plus_sq, minus_sq) = if defined {
            (n * var_p / den_p, n * var_m / den_m)
        } else {
            (f64::NAN, f64::NAN)
        };
        PairSqueezing {
            plus_sq,
            minus_sq,
            sum: plus_sq + minus_sq,
            alpha,
            defined,
        }
    }

    /// Two-mode criterion; entangled when `sum < 2`. Optimization minimizes the sum.
    pub fn xi_pm(&self, alpha: Angle) -> PairSqueezing {
        match alpha {
            Angle::Fixed(a) => self.xi_pm_at(a),
            Angle::Optimize(scan) => {
                let (a, _) = minimize_periodic(|a| self.xi_pm_at(a).sum, PI, scan);
                self.xi_pm_at(a)
            }
        }
    }

    fn xi_phi_at(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        let var = c * c * (self.tyy - self.ty * self.ty)
            + s * s * (self.t33 - self.t3 * self.t3)
            + 2.0 * c * s * (self.ty3 - self.ty * self.t3);
        let tz = -s * self.ty + c * self.t3;
        let den = self.tx * self.tx + tz * tz;
        if !self.den_defined(den) {
            return f64::NAN;
        }
        (self.total_n * var.max(0.0) / den).sqrt()
    }

    /// Isospin squeezing about the x axis rotated by `phi`; squeezed below 1.
    pub fn xi_phi(&self, phi: Angle) -> Squeezing {
        let (p, v) = match phi {
            Angle::Fixed(p) => (p, self.xi_phi_at(p)),
            Angle::Optimize(scan) => minimize_periodic(|p| self.xi_phi_at(p), PI, scan),
        };
        if v.is_finite() {
            Squeezing {
                value: v,
                angle: p,
                defined: true,
            }
        } else {
            Squeezing::undefined(p)
        }
    }

    pub fn report(&self, t: f64, settings: &SqueezeSettings) -> SqueezeReport {
        SqueezeReport {
            t,
            xi_phi_fixed: self.xi_phi(Angle::Fixed(settings.phi)),
            xi_phi_min: self.xi_phi(Angle::Optimize(settings.phi_scan)),
            xi_uv_fixed: self.xi_uv(Angle::Fixed(settings.alpha)),
            xi_uv_min: self.xi_uv(Angle::Optimize(settings.alpha_scan)),
            xi_pm: self.xi_pm(Angle::Optimize(settings.alpha_scan)),
        }
    }
}

/// Fixed angles and scan resolutions for [`SqueezeReport`]s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeSettings {
    pub phi: f64,
    pub alpha: f64,
    pub phi_scan: AngleScan,
    pub alpha_scan: AngleScan,
}

impl Default for SqueezeSettings {
    fn default() -> Self {
        Self {
            phi: 2.0 * PI / 3.0,
            alpha: 0.0,
            phi_scan: AngleScan::default(),
            alpha_scan: AngleScan::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeReport {
    pub t: f64,
    pub xi_phi_fixed: Squeezing,
    pub xi_phi_min: Squeezing,
    pub xi_uv_fixed: Squeezing,
    pub xi_uv_min: Squeezing,
    /// At the quadrature angle minimizing the two-mode sum.
    pub xi_pm: PairSqueezing,
}

/// One-off helpers; they build an operator cache per call, so loops should use
/// [`SqueezeMoments`] with a shared [`OperatorCache`].
pub fn quadrature_stats(state: &StateVector, alpha: f64) -> Result<QuadratureStats> {
    Ok(moments(state)?.quadrature_stats(alpha))
}

pub fn xi_uv(state: &StateVector, alpha: Angle) -> Result<Squeezing> {
    Ok(moments(state)?.xi_uv(alpha))
}

pub fn xi_pm(state: &StateVector, alpha: Angle) -> Result<PairSqueezing> {
    Ok(moments(state)?.xi_pm(alpha))
}

pub fn xi_phi(state: &StateVector, phi: Angle) -> Result<Squeezing> {
    Ok(moments(state)?.xi_phi(phi))
}

fn moments(state: &StateVector) -> Result<SqueezeMoments> {
    SqueezeMoments::new(&OperatorCache::new(state.total_n()), state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{covariance, operator_on, variance};
    use crate::fock::{ModeOccupation, Scope};
    use rand::{Rng, SeedableRng};

    fn fock(a: u32, b: u32, c: u32) -> StateVector {
        StateVector::basis_state(&ModeOccupation::new(a, b, c))
    }

    #[test]
    fn polar_fock_state_thresholds() {
        let n = 40u32;
        let psi = fock(0, n, 0);
        let m = SqueezeMoments::new(&OperatorCache::new(n), &psi).unwrap();
        for alpha in [0.0, 0.4, 2.0] {
            let q = m.quadrature_stats(alpha);
            let nf = n as f64;
            for v in [q.var_xu, q.var_xv, q.var_xu_perp, q.var_xv_perp] {
                assert!((v - nf / 2.0).abs() < 1e-12);
            }
            assert!((q.var_qplus - nf / 4.0).abs() < 1e-12);
            assert!((q.var_qminus_perp - nf / 4.0).abs() < 1e-12);
            assert_eq!(q.c_uv, 0.0);
        }
        let x = m.xi_uv(Angle::Fixed(0.3));
        assert!((x.value - 0.75).abs() < 1e-12);
        let p = m.xi_pm(Angle::Fixed(1.1));
        assert!((p.plus_sq - 1.0).abs() < 1e-12 && (p.minus_sq - 1.0).abs() < 1e-12);
        assert!((p.sum - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_excitation() {
        let m = SqueezeMoments::new(&OperatorCache::new(1), &fock(0, 1, 0)).unwrap();
        let q = m.quadrature_stats(0.7);
        assert!((q.var_xu - 0.5).abs() < 1e-15 && (q.var_xv - 0.5).abs() < 1e-15);
    }

    fn random_state(n: u32, rng: &mut impl Rng) -> StateVector {
        let scope = Scope::Full { total_n: n };
        let amps = (0..scope.dim())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        StateVector::normalized(scope, amps).unwrap()
    }

    #[test]
    fn table_matches_brute_force_operators() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 5;
        let psi = random_state(n, &mut rng);
        let scope = psi.scope();
        let m = SqueezeMoments::new(&OperatorCache::new(n), &psi).unwrap();
        let alpha: f64 = 0.83;
        let c = |x: f64| Complex64::new(x, 0.0);
        let e = Complex64::from_polar(1.0, alpha);
        let um = operator_on(OperatorKind::UMinus, scope).unwrap();
        let up = operator_on(OperatorKind::UPlus, scope).unwrap();
        let vm = operator_on(OperatorKind::VMinus, scope).unwrap();
        let vp = operator_on(OperatorKind::VPlus, scope).unwrap();
        let s = c(0.5 * std::f64::consts::FRAC_1_SQRT_2);
        let qp = crate::algebra::OperatorMatrix::linear_combination(&[
            (e * s, &vm),
            (e.conj() * s, &vp),
            (e * s, &um),
            (e.conj() * s, &up),
        ])
        .unwrap();
        let q = m.quadrature_stats(alpha);
        assert!((variance(&psi, &qp).unwrap() - q.var_qplus).abs() < 1e-12);
        let cov = covariance(&psi, &vp, &up).unwrap();
        assert!(((Complex64::from_polar(1.0, -2.0 * alpha) * cov).re - q.c_uv).abs() < 1e-12);
        let ty = operator_on(OperatorKind::Ty, scope).unwrap();
        let t3 = operator_on(OperatorKind::T3, scope).unwrap();
        let tx = operator_on(OperatorKind::Tx, scope).unwrap();
        let phi: f64 = 1.9;
        let rot = crate::algebra::OperatorMatrix::linear_combination(&[
            (c(phi.cos()), &ty),
            (c(phi.sin()), &t3),
        ])
        .unwrap();
        let tz = crate::algebra::OperatorMatrix::linear_combination(&[
            (c(-phi.sin()), &ty),
            (c(phi.cos()), &t3),
        ])
        .unwrap();
        let txm = crate::algebra::expectation(&psi, &tx).unwrap().re;
        let tzm = crate::algebra::expectation(&psi, &tz).unwrap().re;
        let brute = (n as f64 * variance(&psi, &rot).unwrap() / (txm * txm + tzm * tzm)).sqrt();
        assert!((brute - m.xi_phi(Angle::Fixed(phi)).value).abs() < 1e-12);
    }

    #[test]
    fn quadrature_identity_and_bound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let cache = OperatorCache::new(6);
        for _ in 0..10 {
            let psi = random_state(6, &mut rng);
            let m = SqueezeMoments::new(&cache, &psi).unwrap();
            let alpha = rng.gen_range(0.0..PI);
            let q = m.quadrature_stats(alpha);
            assert!(q.identity_residual().abs() < 1e-10);
            assert!(
                q.var_qplus + q.var_qminus_perp - (0.75 * m.hypercharge().abs() + q.c_uv) >= -1e-9
            );
            assert_eq!(
                m.bound_slack(alpha),
                q.var_qplus + q.var_qminus_perp - (0.75 * m.hypercharge().abs() + q.c_uv)
            );
        }
    }

    #[test]
    fn undefined_when_hypercharge_vanishes() {
        // (1,1,1): <Y> = 0
        let m = SqueezeMoments::new(&OperatorCache::new(3), &fock(1, 1, 1)).unwrap();
        let x = m.xi_uv(Angle::optimize());
        assert!(!x.defined && x.value.is_nan());
    }
}
