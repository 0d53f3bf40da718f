//! Ground states, the hypercharge Gaussian, the approximate `Y`-lattice chain
//! and fragmentation diagnostics.

use std::fmt;

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use num_complex::Complex64;

use crate::algebra::{hamiltonian_tridiagonal, ModelParams, SymTridiagonal};
use crate::error::{Error, Result};
use crate::evolve::diagonalize_tridiagonal;
use crate::fock::{BlockKey, Mode, Scope, StateVector};

/// Default fraction of `N` an eigenvalue of the one-particle density must exceed
/// to count as macroscopic.
pub const DEFAULT_FRAGMENT_FRACTION: f64 = 0.1;

/// `Y0 = -N/6 - 1/4`, the minimum of the hypercharge potential.
pub fn hypercharge_center(total_n: u32) -> f64 {
    -(total_n as f64) / 6.0 - 0.25
}

fn fix_sign(v: &mut [f64]) {
    let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if let Some(last) = v.iter().rev().find(|x| x.abs() > 1e-12 * scale) {
        if *last < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Lowest eigenpair of block `(N, m)`; the vector is real and sign-fixed so the
/// amplitude at the largest `n0` is positive.
pub fn ground_state(total_n: u32, m: i32, params: &ModelParams) -> Result<(f64, StateVector)> {
    let key = BlockKey::new(total_n, m);
    if key.is_empty() {
        return Err(Error::EmptyBlock { n: total_n, m });
    }
    let t = hamiltonian_tridiagonal(params, key)?;
    let es = diagonalize_tridiagonal(&t, key)?;
    let mut v = es.vector(0);
    fix_sign(&mut v);
    let psi = StateVector::normalized(
        Scope::Block(key),
        v.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
    )?;
    Ok((es.eigenvalues[0], psi))
}

/// Parameter-free Gaussian approximation of the ferromagnetic `m = 0` ground state
/// on the even-`n0` lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianProfile {
    pub total_n: u32,
    pub n_zero: Vec<u32>,
    pub hypercharge: Vec<f64>,
    pub amplitudes: Vec<f64>,
}

impl GaussianProfile {
    /// As a state of block `(N, 0)` (same ordering: ascending `n0`).
    pub fn to_state(&self) -> Result<StateVector> {
        StateVector::new(
            Scope::Block(BlockKey::new(self.total_n, 0)),
            self.amplitudes
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect(),
        )
    }

    pub fn peak_n_zero(&self) -> u32 {
        let i = self
            .amplitudes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.n_zero[i]
    }
}

/// `psi(Y) ~ exp(-sqrt2 (Y - Y0)^2 / (8|Y0|) + (Y - Y0)/(4|Y0|))` at `Y = N/3 - n0`,
/// normalized on the lattice.
pub fn gaussian_profile(total_n: u32) -> Result<GaussianProfile> {
    if total_n < 4 || !total_n.is_multiple_of(2) {
        return Err(Error::contract(format!(
            "the hypercharge Gaussian needs even N >= 4, got {total_n}"
        )));
    }
    let n = total_n as f64;
    let y0 = hypercharge_center(total_n);
    let n_zero: Vec<u32> = (0..=total_n).step_by(2).collect();
    let hypercharge: Vec<f64> = n_zero.iter().map(|&k| n / 3.0 - k as f64).collect();
    let expo: Vec<f64> = hypercharge
        .iter()
        .map(|y| -(2f64.sqrt()) * (y - y0).powi(2) / (8.0 * y0.abs()) + (y - y0) / (4.0 * y0.abs()))
        .collect();
    let top = expo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut amplitudes: Vec<f64> = expo.iter().map(|e| (e - top).exp()).collect();
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    amplitudes.iter_mut().for_each(|a| *a /= norm);
    Ok(GaussianProfile {
        total_n,
        n_zero,
        hypercharge,
        amplitudes,
    })
}

/// Sublattice of `n0` for the chain model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Eigenpairs of the approximate chain, ascending energies, vectors as columns
/// over `n_zero` (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpectrum {
    pub parity: Parity,
    pub n_zero: Vec<u32>,
    pub energies: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl ChainSpectrum {
    /// Ground vector, sign-fixed positive at its largest-magnitude entry.
    pub fn ground_vector(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.vectors.column(0).iter().copied().collect();
        let big = v
            .iter()
            .copied()
            .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
        if big < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    }
}

/// The difference-equation model on the `Y` lattice: diagonal `2 (Y - Y0)^2`,
/// hopping `-2 t_Y` with `t_Y = (N/3 - Y)(N/3 + Y/2 + 1)` as written, where the
/// bond between `n0 - 2` and `n0` uses `Y = N/3 - n0`.
pub fn chain_solver(total_n: u32, parity: Parity) -> Result<ChainSpectrum> {
    if total_n < 4 {
        return Err(Error::contract(format!(
            "chain model needs N >= 4, got {total_n}"
        )));
    }
    let n = total_n as f64;
    let y0 = hypercharge_center(total_n);
    let first = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let n_zero: Vec<u32> = (first..=total_n).step_by(2).collect();
    let y: Vec<f64> = n_zero.iter().map(|&k| n / 3.0 - k as f64).collect();
    let t_y = |y: f64| (n / 3.0 - y) * (n / 3.0 + y / 2.0 + 1.0);
    let chain = SymTridiagonal {
        diag: y.iter().map(|y| 2.0 * (y - y0).powi(2)).collect(),
        off: y[1..].iter().map(|&y| -2.0 * t_y(y)).collect(),
    };
    // the chain is not a physical block; the key only labels errors
    let es = diagonalize_tridiagonal(&chain, BlockKey::new(total_n, 0))?;
    Ok(ChainSpectrum {
        parity,
        n_zero,
        energies: es.eigenvalues,
        vectors: es.eigenvectors,
    })
}

/// `rho_{mu nu} = <a_mu^dag a_nu>` with its spectrum and a fragmentation verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix1P {
    pub total_n: u32,
    /// Indexed by [`Mode::index`].
    pub entries: Matrix3<Complex64>,
    /// Ascending.
    pub eigenvalues: [f64; 3],
    pub fraction: f64,
    pub fragmented: bool,
}

impl DensityMatrix1P {
    pub fn diagonal(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.entries[(i, i)].re)
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// Eigenvalues above `fraction * N`.
    pub fn macroscopic_count(&self) -> usize {
        let cut = self.fraction * self.total_n as f64;
        self.eigenvalues.iter().filter(|&&e| e > cut).count()
    }
}

impl fmt::Display for DensityMatrix1P {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.diagonal();
        writeln!(f, "one-particle density, N = {}", self.total_n)?;
        writeln!(
            f,
            "  diagonal (n-, n0, n+) = ({:.6}, {:.6}, {:.6})",
            d[0], d[1], d[2]
        )?;
        writeln!(
            f,
            "  eigenvalues = ({:.6}, {:.6}, {:.6})",
            self.eigenvalues[0], self.eigenvalues[1], self.eigenvalues[2]
        )?;
        write!(
            f,
            "  {} macroscopic eigenvalue(s) above {} N -> {}",
            self.macroscopic_count(),
            self.fraction,
            if self.fragmented {
                "fragmented"
            } else {
                "not fragmented"
            }
        )
    }
}

pub fn one_particle_density(state: &StateVector) -> Result<DensityMatrix1P> {
    one_particle_density_with(state, DEFAULT_FRAGMENT_FRACTION)
}

/// As [`one_particle_density`] with a custom macroscopic fraction.
pub fn one_particle_density_with(state: &StateVector, fraction: f64) -> Result<DensityMatrix1P> {
    if (state.norm_sqr() - 1.0).abs() > crate::fock::NORM_TOL {
        return Err(Error::contract(
            "one-particle density needs a normalized state",
        ));
    }
    let modes = [Mode::Minus, Mode::Zero, Mode::Plus];
    let mut rho = Matrix3::<Complex64>::zeros();
    for (occ, amp) in state.iter() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        for nu in modes {
            let n_nu = occ.get(nu);
            if n_nu == 0 {
                continue;
            }
            for mu in modes {
                // <psi| a_mu^dag a_nu |occ>
                let mut img = occ;
                *img.get_mut(nu) -= 1;
                let n_mu = img.get(mu);
                *img.get_mut(mu) += 1;
                let coeff = ((n_nu as f64) * (n_mu as f64 + 1.0)).sqrt();
                let bra = state.amplitude(&img);
                rho[(mu.index(), nu.index())] += bra.conj() * amp * coeff;
            }
        }
    }
    // exact Hermitization of rounding noise
    let rho = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(rho);
    let mut eigenvalues = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    eigenvalues.sort_by(f64::total_cmp);
    let total_n = state.total_n();
    let cut = fraction * total_n as f64;
    Ok(DensityMatrix1P {
        total_n,
        entries: rho,
        eigenvalues,
        fraction,
        fragmented: eigenvalues.iter().filter(|&&e| e > cut).count() >= 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ModeOccupation;
    use crate::prepare::{coherent_state, CoherentSpec};

    #[test]
    fn ferromagnetic_blocks_are_degenerate() {
        let p = ModelParams::default();
        let (e0, _) = ground_state(30, 0, &p).unwrap();
        let (e1, _) = ground_state(30, 1, &p).unwrap();
        assert!((e0 - e1).abs() < 1e-9 * e0.abs());
        assert!((e0 - p.energy(30, 30)).abs() < 1e-9 * e0.abs());
    }

    #[test]
    fn polar_ground_is_singlet() {
        let (e, psi) = ground_state(20, 0, &ModelParams::polar()).unwrap();
        assert!((e - ModelParams::polar().energy(20, 0)).abs() < 1e-9);
        let l2 =
            crate::algebra::operator_matrix(crate::algebra::OperatorKind::L2, BlockKey::new(20, 0))
                .unwrap();
        assert!(crate::algebra::expectation(&psi, &l2).unwrap().re.abs() < 1e-8);
    }

    #[test]
    fn gaussian_is_normalized_and_peaked() {
        let g = gaussian_profile(100).unwrap();
        let s: f64 = g.amplitudes.iter().map(|a| a * a).sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!((g.peak_n_zero() as i64 - 50).abs() <= 2);
        assert!(gaussian_profile(7).is_err());
        assert!(gaussian_profile(2).is_err());
    }

    #[test]
    fn density_of_fock_and_coherent_states() {
        let psi = StateVector::basis_state(&ModeOccupation::new(0, 12, 0));
        let d = one_particle_density(&psi).unwrap();
        assert_eq!(d.diagonal(), [0.0, 12.0, 0.0]);
        assert!(!d.fragmented);
        let spec = CoherentSpec::from_polar(12, [0.2, 0.5, 0.3], [0.4, 0.0, -1.0]).unwrap();
        let d = one_particle_density(&coherent_state(&spec).unwrap()).unwrap();
        assert!((d.eigenvalues[2] - 12.0).abs() < 1e-9);
        assert!(d.eigenvalues[1].abs() < 1e-9 * 12.0);
        // rho = N conj(alpha) alpha^T
        for mu in 0..3 {
            for nu in 0..3 {
                let expected = spec.alphas[mu].conj() * spec.alphas[nu] * 12.0;
                assert!((d.entries[(mu, nu)] - expected).norm() < 1e-10);
            }
        }
        assert!(!d.fragmented);
    }

    #[test]
    fn chain_parities_nearly_degenerate() {
        let e = chain_solver(200, Parity::Even).unwrap();
        let o = chain_solver(200, Parity::Odd).unwrap();
        assert!((e.energies[0] - o.energies[0]).abs() / e.energies[0].abs() <= 3.0 / 200.0);
    }
}
