use num_complex::Complex64;

use super::kind::OperatorKind;
use super::matrix::{operator_on, OperatorMatrix};
use crate::error::{Error, Result};
use crate::fock::{full_dim, BlockKey, Scope};

/// Environment variable overriding [`DEFAULT_DENSE_CAP`].
pub const DENSE_CAP_ENV: &str = "SPINORSIM_DENSE_CAP";

/// Largest full-basis dimension handled with dense linear algebra (N = 60).
pub const DEFAULT_DENSE_CAP: usize = 1891;

pub fn dense_cap() -> usize {
    std::env::var(DENSE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DENSE_CAP)
}

/// Field-gradient couplings `alpha (T+ + T-) + beta T3^2 - gamma T3`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MagneticParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl MagneticParams {
    pub fn is_zero(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0 && self.gamma == 0.0
    }
}

/// Couplings of `mu N - lambda_s N(N+1) + lambda_a (L^2 - 2N)`.
///
/// Time is measured in units of `hbar/|lambda_a|`; the default is the
/// ferromagnetic point `lambda_a = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub lambda_a: f64,
    pub lambda_s: f64,
    pub mu: f64,
    pub magnetic: Option<MagneticParams>,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            lambda_a: -1.0,
            lambda_s: 0.0,
            mu: 0.0,
            magnetic: None,
        }
    }
}

impl ModelParams {
    pub fn ferromagnetic() -> Self {
        Self::default()
    }

    pub fn polar() -> Self {
        Self {
            lambda_a: 1.0,
            ..Self::default()
        }
    }

    /// Magnetic terms that actually do something.
    pub fn active_magnetic(&self) -> Option<MagneticParams> {
        self.magnetic.filter(|m| !m.is_zero())
    }

    /// `mu N - lambda_s N(N+1)`
    pub fn constant(&self, total_n: u32) -> f64 {
        let n = total_n as f64;
        self.mu * n - self.lambda_s * n * (n + 1.0)
    }

    /// Energy of the angular-momentum multiplet `l` at atom number `N`.
    pub fn energy(&self, total_n: u32, l: u32) -> f64 {
        let (n, l) = (total_n as f64, l as f64);
        self.constant(total_n) + self.lambda_a * (l * (l + 1.0) - 2.0 * n)
    }
}

/// Real symmetric tridiagonal matrix; `off[i]` couples rows `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_operator(&self, key: BlockKey) -> OperatorMatrix {
        let scope = Scope::Block(key);
        let c = |x: f64| Complex64::new(x, 0.0);
        let diag = self.diag.iter().enumerate().map(|(i, &d)| (i, i, c(d)));
        let upper = self.off.iter().enumerate().map(|(i, &o)| (i, i + 1, c(o)));
        let lower = self.off.iter().enumerate().map(|(i, &o)| (i + 1, i, c(o)));
        OperatorMatrix::from_triplets(scope, scope, diag.chain(upper).chain(lower))
    }

    /// Reads a block operator back as a tridiagonal matrix, rejecting anything
    /// complex, asymmetric, or with entries beyond the first off-diagonal.
    pub fn from_operator(op: &OperatorMatrix) -> Result<Self> {
        let key = match (op.source(), op.target()) {
            (Scope::Block(s), Scope::Block(t)) if s == t => s,
            _ => {
                return Err(Error::contract(
                    "tridiagonal form needs a square block operator",
                ))
            }
        };
        let n = key.dim();
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n.saturating_sub(1)];
        let mut lower = vec![0.0; n.saturating_sub(1)];
        for (r, c, v) in op.entries() {
            if v.im != 0.0 {
                return Err(Error::contract("block Hamiltonian has complex entries"));
            }
            match c as isize - r as isize {
                0 => diag[r] = v.re,
                1 => upper[r] = v.re,
                -1 => lower[c] = v.re,
                _ => return Err(Error::contract("matrix is not tridiagonal")),
            }
        }
        if upper != lower {
            return Err(Error::contract("matrix is not symmetric"));
        }
        Ok(Self { diag, off: upper })
    }
}

/// Block Hamiltonian in tridiagonal form, straight from the ladder rules:
/// `L^2` has diagonal `m^2 + m + 2[n0 (n+ + 1) + (n0 + 1) n-]` and the spin
/// mixing element `2 sqrt(n0 (n0 - 1) (n- + 1)(n+ + 1))` between neighbours.
pub fn hamiltonian_tridiagonal(params: &ModelParams, key: BlockKey) -> Result<SymTridiagonal> {
    if params.active_magnetic().is_some() {
        return Err(Error::contract(
            "magnetic terms couple blocks; use hamiltonian_full",
        ));
    }
    if key.is_empty() {
        return Ok(SymTridiagonal {
            diag: Vec::new(),
            off: Vec::new(),
        });
    }
    let n = key.total_n as f64;
    let m = key.magnetization as f64;
    let constant = params.constant(key.total_n);
    let states: Vec<_> = (0..key.dim()).map(|i| key.state_at(i)).collect();
    let diag = states
        .iter()
        .map(|s| {
            let (nm, n0, np) = (s.n_minus as f64, s.n_zero as f64, s.n_plus as f64);
            let l2 = m * m + m + 2.0 * (n0 * (np + 1.0) + (n0 + 1.0) * nm);
            constant + params.lambda_a * (l2 - 2.0 * n)
        })
        .collect();
    let off = states
        .windows(2)
        .map(|w| {
            let s = &w[1];
            let (nm, n0, np) = (s.n_minus as f64, s.n_zero as f64, s.n_plus as f64);
            params.lambda_a * 2.0 * (n0 * (n0 - 1.0) * (nm + 1.0) * (np + 1.0)).sqrt()
        })
        .collect();
    Ok(SymTridiagonal { diag, off })
}

pub fn hamiltonian_block(params: &ModelParams, key: BlockKey) -> Result<OperatorMatrix> {
    Ok(hamiltonian_tridiagonal(params, key)?.to_operator(key))
}

/// Hamiltonian over the full fixed-`N` basis, including magnetic terms.
pub fn hamiltonian_full(params: &ModelParams, total_n: u32) -> Result<OperatorMatrix> {
    let required = full_dim(total_n);
    let allowed = dense_cap();
    if required > allowed {
        return Err(Error::Resource { required, allowed });
    }
    let scope = Scope::Full { total_n };
    let bare = ModelParams {
        magnetic: None,
        ..*params
    };
    let mut triplets = Vec::new();
    for key in scope.blocks() {
        let off = scope.block_offset(&key).expect("own block");
        let h = hamiltonian_block(&bare, key)?;
        triplets.extend(h.entries().map(|(r, c, v)| (r + off, c + off, v)));
    }
    let block_part = OperatorMatrix::from_triplets(scope, scope, triplets);
    let Some(mag) = params.active_magnetic() else {
        return Ok(block_part);
    };
    let c = |x: f64| Complex64::new(x, 0.0);
    let t3 = operator_on(OperatorKind::T3, scope)?;
    let t3sq = t3.compose(&t3)?;
    OperatorMatrix::linear_combination(&[
        (c(1.0), &block_part),
        (c(mag.alpha), &operator_on(OperatorKind::TPlus, scope)?),
        (c(mag.alpha), &operator_on(OperatorKind::TMinus, scope)?),
        (c(mag.beta), &t3sq),
        (c(-mag.gamma), &t3),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::operator_matrix;
    use nalgebra::SymmetricEigen;

    #[test]
    fn single_atom_block_is_zero() {
        let p = ModelParams::default();
        for m in -1..=1 {
            let h = hamiltonian_tridiagonal(&p, BlockKey::new(1, m)).unwrap();
            assert_eq!(h.diag, vec![0.0]);
        }
    }

    #[test]
    fn two_atom_block() {
        let h = hamiltonian_tridiagonal(&ModelParams::default(), BlockKey::new(2, 0)).unwrap();
        assert_eq!(h.diag, vec![2.0, 0.0]);
        assert!((h.off[0] + 8f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_matches_ladder_polynomial() {
        let p = ModelParams {
            lambda_a: -0.7,
            lambda_s: 0.3,
            mu: 1.1,
            magnetic: None,
        };
        for n in 0..=14u32 {
            for m in -(n as i32)..=n as i32 {
                let key = BlockKey::new(n, m);
                let h = hamiltonian_block(&p, key).unwrap().to_dense();
                let l2 = operator_matrix(OperatorKind::L2, key).unwrap().to_dense();
                let mut expected = l2.map(|v| v * p.lambda_a);
                for i in 0..key.dim() {
                    expected[(i, i)] += p.constant(n) - 2.0 * p.lambda_a * n as f64;
                }
                assert!((h - expected).iter().all(|z| z.norm() < 1e-10), "{key}");
            }
        }
    }

    #[test]
    fn rejects_non_tridiagonal_input() {
        let key = BlockKey::new(6, 0);
        let h = hamiltonian_block(&ModelParams::default(), key).unwrap();
        assert!(SymTridiagonal::from_operator(&h).is_ok());
        let g = operator_on(OperatorKind::Tx, Scope::Full { total_n: 2 }).unwrap();
        assert!(SymTridiagonal::from_operator(&g).is_err());
    }

    #[test]
    fn magnetic_zero_is_direct_sum() {
        let n = 6;
        let p = ModelParams {
            magnetic: Some(MagneticParams::default()),
            ..ModelParams::default()
        };
        let full = hamiltonian_full(&p, n).unwrap().to_dense();
        let scope = Scope::Full { total_n: n };
        for key in scope.blocks() {
            let off = scope.block_offset(&key).unwrap();
            let b = hamiltonian_block(&ModelParams::default(), key)
                .unwrap()
                .to_dense();
            let d = key.dim();
            assert_eq!(full.view((off, off), (d, d)), b);
        }
        let mut zeroed = full.clone();
        for key in scope.blocks() {
            let off = scope.block_offset(&key).unwrap();
            let d = key.dim();
            zeroed
                .view_mut((off, off), (d, d))
                .fill(Complex64::new(0.0, 0.0));
        }
        assert!(zeroed.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn isospin_hopping_spectrum_single_atom() {
        let p = ModelParams {
            lambda_a: 0.0,
            lambda_s: 0.0,
            mu: 0.0,
            magnetic: Some(MagneticParams {
                alpha: 1.0,
                beta: 0.0,
                gamma: 0.0,
            }),
        };
        let h = hamiltonian_full(&p, 1).unwrap().to_dense_real().unwrap();
        let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zeeman_term_is_diagonal() {
        let p = ModelParams {
            lambda_a: 0.0,
            magnetic: Some(MagneticParams {
                alpha: 0.0,
                beta: 0.0,
                gamma: 1.0,
            }),
            ..ModelParams::default()
        };
        let scope = Scope::Full { total_n: 2 };
        let h = hamiltonian_full(&p, 2).unwrap();
        for (r, c, v) in h.entries() {
            assert_eq!(r, c);
            let occ = scope.states().nth(r).unwrap();
            assert!((v.re + occ.magnetization() as f64 / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn dense_cap_enforced() {
        let err = hamiltonian_full(&ModelParams::default(), 70).unwrap_err();
        assert_eq!(
            err,
            Error::Resource {
                required: full_dim(70),
                allowed: DEFAULT_DENSE_CAP
            }
        );
    }
}
