use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::kind::OperatorKind;
use super::ladder::Polynomial;
use crate::error::{Error, Result};
use crate::fock::{BlockKey, Scope};

/// Sparse operator between two scopes, stored row-compressed.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    source: Scope,
    target: Scope,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl OperatorMatrix {
    /// Assembles from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(
        source: Scope,
        target: Scope,
        triplets: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Self {
        let rows = target.dim();
        let mut per_row: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triplets {
            *per_row[r].entry(c).or_default() += v;
        }
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in per_row {
            for (c, v) in row {
                if v != Complex64::new(0.0, 0.0) {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            source,
            target,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Realizes a ladder polynomial from `source` into `target`. Images that fall
    /// outside `target` are a contract violation.
    pub fn from_polynomial(poly: &Polynomial, source: Scope, target: Scope) -> Result<Self> {
        let mut triplets = Vec::new();
        for (col, occ) in source.states().enumerate() {
            for (img, amp) in poly.apply(&occ) {
                let row = target.index_of(&img).ok_or_else(|| {
                    Error::contract(format!(
                        "operator maps {occ} to {img}, outside target scope {target:?}"
                    ))
                })?;
                triplets.push((row, col, amp));
            }
        }
        Ok(Self::from_triplets(source, target, triplets))
    }

    pub fn source(&self) -> Scope {
        self.source
    }

    pub fn target(&self) -> Scope {
        self.target
    }

    pub fn rows(&self) -> usize {
        self.target.dim()
    }

    pub fn cols(&self) -> usize {
        self.source.dim()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        self.col_idx[range.clone()]
            .iter()
            .position(|&c| c == col)
            .map_or(Complex64::new(0.0, 0.0), |p| self.values[range.start + p])
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.rows()).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |p| (r, self.col_idx[p], self.values[p]))
        })
    }

    /// `y = A x`
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols(), "operand length");
        (0..self.rows())
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|p| self.values[p] * x[self.col_idx[p]])
                    .sum()
            })
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.target,
            self.source,
            self.entries().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `sum_i c_i A_i` over operators sharing source and target.
    pub fn linear_combination(terms: &[(Complex64, &OperatorMatrix)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::contract("empty linear combination"))?;
        let (source, target) = (first.source, first.target);
        if terms
            .iter()
            .any(|(_, m)| m.source != source || m.target != target)
        {
            return Err(Error::contract(
                "linear combination across different scopes",
            ));
        }
        Ok(Self::from_triplets(
            source,
            target,
            terms
                .iter()
                .flat_map(|(c, m)| m.entries().map(move |(r, k, v)| (r, k, *c * v))),
        ))
    }

    /// Sparse product `self * rhs`.
    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<Self> {
        if rhs.target != self.source {
            return Err(Error::contract(format!(
                "cannot compose: inner scopes {:?} and {:?} differ",
                rhs.target, self.source
            )));
        }
        let rhs_cols = rhs.to_column_lists();
        // A (B e_c) column by column
        let mut out = Vec::new();
        for (c, col) in rhs_cols.iter().enumerate() {
            let mut x = vec![Complex64::new(0.0, 0.0); self.cols()];
            for &(k, v) in col {
                x[k] += v;
            }
            for (r, y) in self.apply(&x).into_iter().enumerate() {
                if y != Complex64::new(0.0, 0.0) {
                    out.push((r, c, y));
                }
            }
        }
        Ok(Self::from_triplets(rhs.source, self.target, out))
    }

    fn to_column_lists(&self) -> Vec<Vec<(usize, Complex64)>> {
        let mut cols = vec![Vec::new(); self.cols()];
        for (r, c, v) in self.entries() {
            cols[c].push((r, v));
        }
        cols
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows(), self.cols());
        for (r, c, v) in self.entries() {
            m[(r, c)] += v;
        }
        m
    }

    /// Real part as a dense matrix; fails if any entry has an imaginary part.
    pub fn to_dense_real(&self) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(self.rows(), self.cols());
        for (r, c, v) in self.entries() {
            if v.im != 0.0 {
                return Err(Error::contract("operator has complex entries"));
            }
            m[(r, c)] += v.re;
        }
        Ok(m)
    }

    /// Largest `|A - A^dag|` entry; only meaningful for square operators.
    pub fn hermiticity_defect(&self) -> f64 {
        if self.source != self.target {
            return f64::INFINITY;
        }
        let d = self.to_dense();
        let mut worst = 0.0f64;
        for r in 0..d.nrows() {
            for c in 0..d.ncols() {
                worst = worst.max((d[(r, c)] - d[(c, r)].conj()).norm());
            }
        }
        worst
    }
}

/// Matrix of `kind` acting on one `(N, m)` block. The target block follows
/// from the tag's displacement; an empty target gives an empty matrix.
pub fn operator_matrix(kind: OperatorKind, source: BlockKey) -> Result<OperatorMatrix> {
    if source.is_empty() {
        return Err(Error::EmptyBlock {
            n: source.total_n,
            m: source.magnetization,
        });
    }
    let (dn, dm) = kind.block_displacement().ok_or_else(|| {
        Error::contract(format!(
            "{kind} couples block {source} to several blocks; build it on the full scope"
        ))
    })?;
    let target_n = source.total_n as i64 + dn as i64;
    if target_n < 0 {
        return Err(Error::contract(format!(
            "{kind} lowers the atom number of {source} below zero"
        )));
    }
    let target = BlockKey::new(target_n as u32, source.magnetization + dm);
    OperatorMatrix::from_polynomial(
        &kind.polynomial(),
        Scope::Block(source),
        Scope::Block(target),
    )
}

/// Matrix of `kind` on a whole scope. For a full scope the target is the full
/// space at the shifted atom number.
pub fn operator_on(kind: OperatorKind, source: Scope) -> Result<OperatorMatrix> {
    match source {
        Scope::Block(key) => operator_matrix(kind, key),
        Scope::Full { .. } => {
            let (dn, _) = kind.block_displacement().unwrap_or((0, 0));
            let target = source.shifted_total(dn).ok_or_else(|| {
                Error::contract(format!("{kind} lowers the atom number below zero"))
            })?;
            OperatorMatrix::from_polynomial(&kind.polynomial(), source, target)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{enumerate_block, ModeOccupation};

    fn close(a: Complex64, b: f64) -> bool {
        (a.re - b).abs() < 1e-12 && a.im.abs() < 1e-12
    }

    #[test]
    fn l2_single_atom_is_two() {
        let full = operator_on(OperatorKind::L2, Scope::Full { total_n: 1 }).unwrap();
        let d = full.to_dense();
        for r in 0..3 {
            for c in 0..3 {
                assert!(close(d[(r, c)], if r == c { 2.0 } else { 0.0 }));
            }
        }
    }

    #[test]
    fn l2_two_atoms_m0() {
        let m = operator_matrix(OperatorKind::L2, BlockKey::new(2, 0)).unwrap();
        let s8 = 8f64.sqrt();
        assert!(close(m.get(0, 0), 2.0));
        assert!(close(m.get(0, 1), s8));
        assert!(close(m.get(1, 0), s8));
        assert!(close(m.get(1, 1), 4.0));
    }

    #[test]
    fn spin_mixing_matrix_element() {
        let k = operator_matrix(OperatorKind::KPlus, BlockKey::new(2, 0)).unwrap();
        let b = enumerate_block(2, 0).unwrap();
        let row = b.index_of(&ModeOccupation::new(1, 0, 1)).unwrap();
        let col = b.index_of(&ModeOccupation::new(0, 2, 0)).unwrap();
        assert!(close(k.get(row, col), 2f64.sqrt()));
    }

    #[test]
    fn empty_target_gives_empty_matrix() {
        let m = operator_matrix(OperatorKind::TPlus, BlockKey::new(3, 2)).unwrap();
        assert_eq!(m.rows(), 0);
        assert_eq!(m.cols(), BlockKey::new(3, 2).dim());
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn mixed_tags_need_full_scope() {
        assert!(operator_matrix(OperatorKind::Tx, BlockKey::new(3, 1)).is_err());
        let tx = operator_on(OperatorKind::Tx, Scope::Full { total_n: 3 }).unwrap();
        assert!(tx.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn hermitian_tags_are_hermitian() {
        for k in OperatorKind::ALL.iter().filter(|k| k.is_hermitian()) {
            let m = operator_on(*k, Scope::Full { total_n: 5 }).unwrap();
            assert!(m.hermiticity_defect() < 1e-13, "{k}");
        }
    }

    #[test]
    fn compose_matches_dense_product() {
        let s = Scope::Full { total_n: 4 };
        let a = operator_on(OperatorKind::VPlus, s).unwrap();
        let b = operator_on(OperatorKind::UMinus, s).unwrap();
        let ab = a.compose(&b).unwrap().to_dense();
        let dense = a.to_dense() * b.to_dense();
        assert!((ab - dense).iter().all(|z| z.norm() < 1e-12));
    }
}
