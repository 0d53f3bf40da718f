//! SU(3) generators in the Schwinger-boson realization, Hamiltonians, and
//! moments.
//!
//! Everything is built from the exact ladder rules; closed-form SU(3) matrix
//! elements only appear in tests as cross-checks.

mod hamiltonian;
mod identities;
mod kind;
pub mod ladder;
mod matrix;
mod moments;

pub use hamiltonian::{
    dense_cap, hamiltonian_block, hamiltonian_full, hamiltonian_tridiagonal, MagneticParams,
    ModelParams, SymTridiagonal, DEFAULT_DENSE_CAP, DENSE_CAP_ENV,
};
pub use identities::{
    disentangling_deviations, verify_identities, BchVerdict, IdentityCheck, IdentityReport,
    BCH_ETAS, MAX_BCH_N, MAX_IDENTITY_N,
};
pub use kind::OperatorKind;
pub use matrix::{operator_matrix, operator_on, OperatorMatrix};
pub use moments::{covariance, expectation, second_moment, variance, KindMoments, OperatorCache};
