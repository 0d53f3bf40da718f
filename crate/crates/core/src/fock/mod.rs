//! Three-mode Fock basis at fixed atom number.
//!
//! Occupations are always written in the order `(n_minus, n_zero, n_plus)`.
//! The basis at fixed `N` splits into blocks of constant magnetization
//! `m = n_plus - n_minus`; inside a block the states are sorted by ascending
//! `n_zero`, which moves in steps of two. The full basis concatenates the
//! blocks in ascending `m`.

mod state;

pub use state::{Scope, StateVector, NORM_TOL};

use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};

/// One of the three Zeeman modes `m_f = -1, 0, +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Minus,
    Zero,
    Plus,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Minus, Mode::Zero, Mode::Plus];

    pub fn index(self) -> usize {
        match self {
            Mode::Minus => 0,
            Mode::Zero => 1,
            Mode::Plus => 2,
        }
    }

    /// Magnetic quantum number of the mode.
    pub fn m_f(self) -> i32 {
        self.index() as i32 - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeOccupation {
    pub n_minus: u32,
    pub n_zero: u32,
    pub n_plus: u32,
}

impl ModeOccupation {
    pub const fn new(n_minus: u32, n_zero: u32, n_plus: u32) -> Self {
        Self {
            n_minus,
            n_zero,
            n_plus,
        }
    }

    pub fn total(&self) -> u32 {
        self.n_minus + self.n_zero + self.n_plus
    }

    pub fn magnetization(&self) -> i32 {
        self.n_plus as i32 - self.n_minus as i32
    }

    pub fn block_key(&self) -> BlockKey {
        BlockKey {
            total_n: self.total(),
            magnetization: self.magnetization(),
        }
    }

    pub fn get(&self, mode: Mode) -> u32 {
        match mode {
            Mode::Minus => self.n_minus,
            Mode::Zero => self.n_zero,
            Mode::Plus => self.n_plus,
        }
    }

    pub(crate) fn get_mut(&mut self, mode: Mode) -> &mut u32 {
        match mode {
            Mode::Minus => &mut self.n_minus,
            Mode::Zero => &mut self.n_zero,
            Mode::Plus => &mut self.n_plus,
        }
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.n_minus, self.n_zero, self.n_plus]
    }
}

impl fmt::Display for ModeOccupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}>", self.n_minus, self.n_zero, self.n_plus)
    }
}

/// Conserved charges `(N, m)` labelling one block of the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockKey {
    pub total_n: u32,
    pub magnetization: i32,
}

impl BlockKey {
    pub const fn new(total_n: u32, magnetization: i32) -> Self {
        Self {
            total_n,
            magnetization,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.magnetization.unsigned_abs() > self.total_n
    }

    /// `floor((N - |m|)/2) + 1`, or zero for an empty block.
    pub fn dim(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            ((self.total_n - self.magnetization.unsigned_abs()) / 2) as usize + 1
        }
    }

    /// Smallest admissible `n_zero`; all others follow in steps of two.
    pub fn min_n_zero(&self) -> u32 {
        (self.total_n - self.magnetization.unsigned_abs()) % 2
    }

    /// Occupation at position `i` of the block ordering.
    pub fn state_at(&self, i: usize) -> ModeOccupation {
        debug_assert!(i < self.dim());
        let n_zero = self.min_n_zero() + 2 * i as u32;
        let rest = self.total_n - n_zero;
        let n_plus = ((rest as i64 + self.magnetization as i64) / 2) as u32;
        ModeOccupation::new(rest - n_plus, n_zero, n_plus)
    }

    /// Position of `occ` in this block, if it belongs here.
    pub fn index_of(&self, occ: &ModeOccupation) -> Option<usize> {
        if occ.block_key() != *self {
            return None;
        }
        Some(((occ.n_zero - self.min_n_zero()) / 2) as usize)
    }

    pub fn shifted(&self, dn: i32, dm: i32) -> Option<BlockKey> {
        let n = self.total_n as i64 + dn as i64;
        if n < 0 {
            return None;
        }
        let key = BlockKey::new(n as u32, self.magnetization + dm);
        (!key.is_empty()).then_some(key)
    }
}

impl fmt::Display for BlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(N={}, m={})", self.total_n, self.magnetization)
    }
}

/// The states of one `(N, m)` block, sorted by ascending `n_zero`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBlock {
    key: BlockKey,
    states: Vec<ModeOccupation>,
}

impl FockBlock {
    pub fn key(&self) -> BlockKey {
        self.key
    }

    pub fn states(&self) -> &[ModeOccupation] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, occ: &ModeOccupation) -> Option<usize> {
        self.key.index_of(occ)
    }
}

pub fn enumerate_block(total_n: u32, magnetization: i32) -> Result<FockBlock> {
    let key = BlockKey::new(total_n, magnetization);
    if key.is_empty() {
        return Err(Error::EmptyBlock {
            n: total_n,
            m: magnetization,
        });
    }
    let states = (0..key.dim()).map(|i| key.state_at(i)).collect();
    Ok(FockBlock { key, states })
}

/// All blocks `m = -N..=N` in ascending order.
pub fn enumerate_full(total_n: u32) -> Vec<FockBlock> {
    let n = total_n as i32;
    (-n..=n)
        .map(|m| enumerate_block(total_n, m).expect("|m| <= N"))
        .collect()
}

pub fn full_dim(total_n: u32) -> usize {
    let n = total_n as usize;
    (n + 1) * (n + 2) / 2
}

/// `sum_{i=0}^{j} (floor(i/2) + 1)`, with `j = -1` giving zero.
fn cumulative_dims(j: i64) -> usize {
    if j < 0 {
        return 0;
    }
    let j = j as usize;
    (j / 2) * j.div_ceil(2) + j + 1
}

/// Offset of block `m` inside the full basis ordering.
pub(crate) fn block_offset(total_n: u32, magnetization: i32) -> usize {
    let n = total_n as i64;
    let m = magnetization as i64;
    if m <= 0 {
        cumulative_dims(n - m.abs() - 1)
    } else {
        cumulative_dims(n) + cumulative_dims(n - 1) - cumulative_dims(n - m)
    }
}

/// Position of `occ` in the full basis of its own `N`.
pub(crate) fn full_index(occ: &ModeOccupation) -> usize {
    let key = occ.block_key();
    block_offset(key.total_n, key.magnetization) + key.index_of(occ).expect("own block")
}

/// Hypercharge and isospin projection of a Fock state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Charges {
    pub hypercharge: Rational64,
    pub isospin3: Rational64,
}

impl Charges {
    pub fn hypercharge_f64(&self) -> f64 {
        *self.hypercharge.numer() as f64 / *self.hypercharge.denom() as f64
    }

    pub fn isospin3_f64(&self) -> f64 {
        *self.isospin3.numer() as f64 / *self.isospin3.denom() as f64
    }
}

pub fn charges(occ: &ModeOccupation) -> Charges {
    let (nm, n0, np) = (occ.n_minus as i64, occ.n_zero as i64, occ.n_plus as i64);
    Charges {
        hypercharge: Rational64::new(np + nm - 2 * n0, 3),
        isospin3: Rational64::new(np - nm, 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(a: u32, b: u32, c: u32) -> ModeOccupation {
        ModeOccupation::new(a, b, c)
    }

    #[test]
    fn small_blocks() {
        let b = enumerate_block(2, 0).unwrap();
        assert_eq!(b.states(), &[occ(1, 0, 1), occ(0, 2, 0)]);
        let b = enumerate_block(1, 1).unwrap();
        assert_eq!(b.states(), &[occ(0, 0, 1)]);
        let b = enumerate_block(100, 0).unwrap();
        assert_eq!(b.dim(), 51);
        let zeros: Vec<u32> = b.states().iter().map(|s| s.n_zero).collect();
        assert_eq!(zeros, (0..=100).step_by(2).collect::<Vec<_>>());
    }

    #[test]
    fn empty_block_is_an_error() {
        assert_eq!(
            enumerate_block(3, -4),
            Err(Error::EmptyBlock { n: 3, m: -4 })
        );
    }

    #[test]
    fn full_dimensions() {
        for (n, blocks, dim) in [(1, 3, 3), (2, 5, 6), (20, 41, 231)] {
            let full = enumerate_full(n);
            assert_eq!(full.len(), blocks);
            assert_eq!(full.iter().map(FockBlock::dim).sum::<usize>(), dim);
            assert_eq!(full_dim(n), dim);
        }
    }

    #[test]
    fn round_trip_and_offsets_exhaustive() {
        for n in 0..=50 {
            let mut offset = 0;
            for block in enumerate_full(n) {
                let key = block.key();
                assert_eq!(block_offset(n, key.magnetization), offset);
                for (i, s) in block.states().iter().enumerate() {
                    assert_eq!(s.total(), n);
                    assert_eq!(s.magnetization(), key.magnetization);
                    assert_eq!(block.index_of(s), Some(i));
                    assert_eq!(full_index(s), offset + i);
                    assert_eq!(s.n_zero % 2, (n + key.magnetization.unsigned_abs()) % 2);
                }
                for w in block.states().windows(2) {
                    assert_eq!(w[1].n_zero, w[0].n_zero + 2);
                }
                offset += block.dim();
            }
            assert_eq!(offset, full_dim(n));
        }
    }

    #[test]
    fn charge_values() {
        let c = charges(&occ(1, 0, 0));
        assert_eq!(c.hypercharge, Rational64::new(1, 3));
        assert_eq!(c.isospin3, Rational64::new(-1, 2));
        let c = charges(&occ(0, 1, 0));
        assert_eq!(c.hypercharge, Rational64::new(-2, 3));
        assert_eq!(c.isospin3, Rational64::new(0, 1));
        let c = charges(&occ(0, 0, 1));
        assert_eq!(c.hypercharge, Rational64::new(1, 3));
        assert_eq!(c.isospin3, Rational64::new(1, 2));
    }

    #[test]
    fn subspin_bookkeeping() {
        for n in 0..=12 {
            for block in enumerate_full(n) {
                for s in block.states() {
                    let c = charges(s);
                    let u3 = Rational64::new(s.n_minus as i64 - s.n_zero as i64, 2);
                    let v3 = Rational64::new(s.n_plus as i64 - s.n_zero as i64, 2);
                    assert_eq!(u3 + v3, c.hypercharge * Rational64::new(3, 2));
                    assert_eq!(v3 - u3, c.isospin3);
                }
            }
        }
    }
}
