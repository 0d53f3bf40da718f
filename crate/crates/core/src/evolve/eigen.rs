use nalgebra::{DMatrix, SymmetricEigen};

use crate::algebra::{OperatorMatrix, SymTridiagonal};
use crate::error::{Error, Result};
use crate::fock::{BlockKey, Scope};

const MAX_SWEEPS: usize = 60;

/// Eigenpairs of a real symmetric operator, eigenvalues ascending and
/// eigenvectors stored as orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub scope: Scope,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.column(k).iter().copied().collect()
    }

    /// Largest `||H v - lambda v||` over all pairs.
    pub fn max_residual(&self, h: &DMatrix<f64>) -> f64 {
        (0..self.dim())
            .map(|k| {
                let v = self.eigenvectors.column(k);
                (h * v - v * self.eigenvalues[k]).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max |V^T V - I|`
    pub fn orthonormality_defect(&self) -> f64 {
        let v = &self.eigenvectors;
        let g = v.transpose() * v;
        let mut worst = 0.0f64;
        for r in 0..g.nrows() {
            for c in 0..g.ncols() {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((g[(r, c)] - target).abs());
            }
        }
        worst
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix.
///
/// Returns eigenvalues (unsorted) and the accumulated rotations as columns.
pub fn tridiagonal_ql(t: &SymTridiagonal) -> std::result::Result<(Vec<f64>, DMatrix<f64>), String> {
    let n = t.dim();
    let mut d = t.diag.clone();
    let mut e = t.off.clone();
    e.push(0.0);
    let mut z = DMatrix::<f64>::identity(n, n);
    if n == 0 {
        return Ok((d, z));
    }
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(format!("QL iteration did not converge for eigenvalue {l}"));
            }
            // Wilkinson-type shift from the leading 2x2
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zf = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * zf;
                    z[(k, i)] = c * z[(k, i)] - s * zf;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z))
}

fn sorted(scope: Scope, values: Vec<f64>, vectors: DMatrix<f64>) -> EigenSystem {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let eigenvalues = order.iter().map(|&k| values[k]).collect();
    let eigenvectors =
        DMatrix::from_fn(vectors.nrows(), order.len(), |r, c| vectors[(r, order[c])]);
    EigenSystem {
        scope,
        eigenvalues,
        eigenvectors,
    }
}

/// Diagonalizes a real symmetric tridiagonal block operator.
pub fn diagonalize_block(h: &OperatorMatrix) -> Result<EigenSystem> {
    let t = SymTridiagonal::from_operator(h)?;
    let key = match h.source() {
        Scope::Block(k) => k,
        Scope::Full { .. } => unreachable!("from_operator accepts block operators only"),
    };
    diagonalize_tridiagonal(&t, key)
}

pub fn diagonalize_tridiagonal(t: &SymTridiagonal, key: BlockKey) -> Result<EigenSystem> {
    let (values, vectors) = tridiagonal_ql(t).map_err(|reason| Error::Numerical {
        block: Some(key),
        reason,
    })?;
    Ok(sorted(Scope::Block(key), values, vectors))
}

/// Dense route for operators that couple blocks (magnetic terms).
pub fn diagonalize_dense(h: &OperatorMatrix) -> Result<EigenSystem> {
    if h.source() != h.target() {
        return Err(Error::contract(
            "dense diagonalization needs a square operator",
        ));
    }
    let dense = h.to_dense_real()?;
    let eig = SymmetricEigen::new(dense);
    Ok(sorted(
        h.source(),
        eig.eigenvalues.iter().copied().collect(),
        eig.eigenvectors,
    ))
}
