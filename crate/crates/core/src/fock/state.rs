use num_complex::Complex64;

use super::{block_offset, full_dim, full_index, BlockKey, ModeOccupation};
use crate::error::{Error, Result};

/// Normalization tolerance on construction.
pub const NORM_TOL: f64 = 1e-12;

/// Where a vector lives: one `(N, m)` block, or the whole fixed-`N` space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    Block(BlockKey),
    Full { total_n: u32 },
}

impl Scope {
    pub fn total_n(&self) -> u32 {
        match self {
            Scope::Block(k) => k.total_n,
            Scope::Full { total_n } => *total_n,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Scope::Block(k) => k.dim(),
            Scope::Full { total_n } => full_dim(*total_n),
        }
    }

    /// Blocks covered, in ascending `m`.
    pub fn blocks(&self) -> Vec<BlockKey> {
        match self {
            Scope::Block(k) => vec![*k],
            Scope::Full { total_n } => {
                let n = *total_n as i32;
                (-n..=n).map(|m| BlockKey::new(*total_n, m)).collect()
            }
        }
    }

    /// Offset of `key` inside this scope's amplitude vector.
    pub fn block_offset(&self, key: &BlockKey) -> Option<usize> {
        match self {
            Scope::Block(k) => (k == key).then_some(0),
            Scope::Full { total_n } => (key.total_n == *total_n && !key.is_empty())
                .then(|| block_offset(*total_n, key.magnetization)),
        }
    }

    pub fn index_of(&self, occ: &ModeOccupation) -> Option<usize> {
        if let Scope::Full { total_n } = self {
            return (occ.total() == *total_n).then(|| full_index(occ));
        }
        let key = occ.block_key();
        let offset = self.block_offset(&key)?;
        Some(offset + key.index_of(occ)?)
    }

    /// Every basis state with its position, in scope order.
    pub fn states(&self) -> impl Iterator<Item = ModeOccupation> + '_ {
        self.blocks()
            .into_iter()
            .flat_map(|k| (0..k.dim()).map(move |i| k.state_at(i)))
    }

    /// The same `(N, m)` sector(s) after shifting atom number by `dn`.
    pub(crate) fn shifted_total(&self, dn: i32) -> Option<Scope> {
        let n = self.total_n() as i64 + dn as i64;
        if n < 0 {
            return None;
        }
        match self {
            Scope::Block(k) => k.shifted(dn, 0).map(Scope::Block),
            Scope::Full { .. } => Some(Scope::Full { total_n: n as u32 }),
        }
    }
}

/// Normalized complex amplitudes over a [`Scope`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    scope: Scope,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(scope: Scope, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_len(&scope, &amplitudes)?;
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::contract(format!(
                "state vector norm^2 = {norm} is not 1"
            )));
        }
        Ok(Self { scope, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(scope: Scope, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_len(&scope, &amplitudes)?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::contract(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { scope, amplitudes })
    }

    pub(crate) fn from_raw(scope: Scope, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(scope.dim(), amplitudes.len());
        Self { scope, amplitudes }
    }

    pub fn basis_state(occ: &ModeOccupation) -> Self {
        let key = occ.block_key();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); key.dim()];
        amplitudes[key.index_of(occ).expect("own block")] = Complex64::new(1.0, 0.0);
        Self {
            scope: Scope::Block(key),
            amplitudes,
        }
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn total_n(&self) -> u32 {
        self.scope.total_n()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn amplitude(&self, occ: &ModeOccupation) -> Complex64 {
        self.scope
            .index_of(occ)
            .map_or(Complex64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    /// Amplitudes of one block, if the scope covers it.
    pub fn block(&self, key: &BlockKey) -> Option<&[Complex64]> {
        let off = self.scope.block_offset(key)?;
        Some(&self.amplitudes[off..off + key.dim()])
    }

    /// `<self|other>`; both states must share a scope.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.scope != other.scope {
            return Err(Error::contract(format!(
                "inner product across scopes {:?} and {:?}",
                self.scope, other.scope
            )));
        }
        Ok(dot(&self.amplitudes, &other.amplitudes))
    }

    /// `|<self|other>|`, embedding block states into the full space when needed.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        if self.scope == other.scope {
            return Ok(self.inner(other)?.norm());
        }
        if self.total_n() != other.total_n() {
            return Err(Error::contract("overlap between different atom numbers"));
        }
        Ok(self.to_full().inner(&other.to_full())?.norm())
    }

    /// Embeds the state into the full fixed-`N` basis.
    pub fn to_full(&self) -> StateVector {
        match self.scope {
            Scope::Full { .. } => self.clone(),
            Scope::Block(key) => {
                let full = Scope::Full {
                    total_n: key.total_n,
                };
                let mut amplitudes = vec![Complex64::new(0.0, 0.0); full.dim()];
                let off = full.block_offset(&key).expect("block of the same N");
                amplitudes[off..off + key.dim()].copy_from_slice(&self.amplitudes);
                StateVector::from_raw(full, amplitudes)
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeOccupation, Complex64)> + '_ {
        self.scope.states().zip(self.amplitudes.iter().copied())
    }
}

fn check_len(scope: &Scope, amplitudes: &[Complex64]) -> Result<()> {
    if scope.dim() != amplitudes.len() {
        return Err(Error::contract(format!(
            "scope {:?} has dimension {} but {} amplitudes were given",
            scope,
            scope.dim(),
            amplitudes.len()
        )));
    }
    Ok(())
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
