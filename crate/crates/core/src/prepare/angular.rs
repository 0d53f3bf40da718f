use std::collections::BTreeMap;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::glmk::{glmk_vector, GlmkMethod, LnFactorial};
use super::{AngularLabel, CoherentSpec};
use crate::algebra::{operator_matrix, OperatorKind};
use crate::error::{Error, Result};
use crate::fock::{BlockKey, Mode, Scope, StateVector};

/// How to obtain `|l, m>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngularMethod {
    /// Closed-form coefficients.
    Analytic(GlmkMethod),
    /// Eigenvector of the `L^2` block built from ladder operators.
    Numeric,
}

const EIGENVALUE_MATCH_TOL: f64 = 1e-6;

/// Flip `v` so that its amplitude at the largest `n0` with a nonzero entry is positive.
pub(crate) fn fix_sign(v: &mut [f64]) {
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if let Some(last) = v.iter().rev().find(|x| x.abs() > 1e-12 * scale) {
        if *last < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// All `|l, m>` of block `key` from a dense diagonalization of `L^2`,
/// ascending in `l`, sign-fixed.
pub fn angular_basis(key: BlockKey) -> Result<Vec<(u32, Vec<f64>)>> {
    let l2 = operator_matrix(OperatorKind::L2, key)?.to_dense_real()?;
    let eig = SymmetricEigen::new(l2);
    let mut out = Vec::new();
    for l in AngularLabel::ls(key) {
        let target = (l * (l + 1)) as f64;
        let (idx, dist) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, e)| (i, (e - target).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty block");
        if dist > EIGENVALUE_MATCH_TOL * target.max(1.0) {
            return Err(Error::Numerical {
                block: Some(key),
                reason: format!(
                    "no L^2 eigenvalue near l(l+1) = {target} (closest off by {dist:e})"
                ),
            });
        }
        let mut v: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        fix_sign(&mut v);
        out.push((l, v));
    }
    Ok(out)
}

fn real_state(key: BlockKey, v: Vec<f64>) -> Result<StateVector> {
    StateVector::normalized(
        Scope::Block(key),
        v.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
    )
}

/// `|l, m>` as a block-scoped state, sign-fixed at the largest `n0`.
pub fn angular_state(label: AngularLabel, method: AngularMethod) -> Result<StateVector> {
    let key = label.block_key();
    let v = match method {
        AngularMethod::Analytic(g) => {
            let mut v = glmk_vector(label, g)?;
            fix_sign(&mut v);
            v
        }
        AngularMethod::Numeric => angular_basis(key)?
            .into_iter()
            .find(|(l, _)| *l == label.l)
            .map(|(_, v)| v)
            .expect("label validated against the block"),
    };
    real_state(key, v)
}

/// `psi_lm = <l, m|psi>` for every block the state touches.
pub fn angular_projection(state: &StateVector) -> Result<BTreeMap<(u32, i32), Complex64>> {
    let mut out = BTreeMap::new();
    for key in state.scope().blocks() {
        let amps = state.block(&key).expect("block of own scope");
        for (l, v) in angular_basis(key)? {
            let a: Complex64 = v.iter().zip(amps).map(|(g, a)| *g * a).sum();
            out.insert((l, key.magnetization), a);
        }
    }
    Ok(out)
}

/// `psi_lm` of a coherent state from the closed-form coefficients,
/// `Lambda_Nm sum_k eta^k G_Nmk G_lmk`, using the sign convention of
/// [`angular_state`]. Written with integer powers of the amplitudes so that
/// odd `N + m` needs no branch choice.
pub fn coherent_angular_amplitude(spec: &CoherentSpec, label: AngularLabel) -> Result<Complex64> {
    spec.validate()?;
    if label.total_n != spec.total_n {
        return Err(Error::contract("label and coherent spec disagree on N"));
    }
    let key = label.block_key();
    let (n, m) = (label.total_n as i64, label.m as i64);
    let mut g_l = glmk_vector(label, GlmkMethod::Auto)?;
    fix_sign(&mut g_l);
    let top = AngularLabel::new(label.total_n, label.total_n, label.m)?;
    let g_n = glmk_vector(top, GlmkMethod::Auto)?;
    let lnf = LnFactorial::new(2 * label.total_n);
    let ln_lambda = 0.5 * lnf.ln_binom(2 * n, n - m).unwrap();
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..key.dim() {
        let occ = key.state_at(i);
        let mut term = Complex64::new(ln_lambda - 0.5 * occ.n_zero as f64 * 2f64.ln(), 0.0).exp();
        for mode in [Mode::Minus, Mode::Zero, Mode::Plus] {
            term *= spec.alpha(mode).powu(occ.get(mode));
        }
        sum += term * g_n[i] * g_l[i];
    }
    Ok(sum)
}
