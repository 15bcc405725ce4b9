//! Dense materialization and the singular-value oracle used to cross-check
//! the matrix-free paths.

use nalgebra::DMatrix;

use crate::calculus::spectral::LinearOperator;
use crate::error::{Error, Result};
use crate::scalar::{czero, Cx, Real};

/// Largest dimension for which dense materialization is allowed by default.
pub const DEFAULT_DENSE_CAP: usize = 1 << 11;

/// A dense complex matrix wrapped as a [`LinearOperator`].
#[derive(Debug, Clone)]
pub struct DenseOperator<T: Real> {
    pub matrix: DMatrix<Cx<T>>,
}

impl<T: Real> DenseOperator<T> {
    pub fn new(matrix: DMatrix<Cx<T>>) -> Self {
        DenseOperator { matrix }
    }
}

impl<T: Real> LinearOperator<T> for DenseOperator<T> {
    fn dim_in(&self) -> usize {
        self.matrix.ncols()
    }
    fn dim_out(&self) -> usize {
        self.matrix.nrows()
    }
    fn apply(&self, x: &[Cx<T>]) -> Vec<Cx<T>> {
        let (r, c) = self.matrix.shape();
        let mut y = vec![czero(); r];
        for j in 0..c {
            let xj = x[j];
            if xj == czero() {
                continue;
            }
            for (i, yi) in y.iter_mut().enumerate() {
                *yi += self.matrix[(i, j)] * xj;
            }
        }
        y
    }
    fn apply_adjoint(&self, y: &[Cx<T>]) -> Vec<Cx<T>> {
        let (r, c) = self.matrix.shape();
        (0..c)
            .map(|j| (0..r).fold(czero(), |acc, i| acc + self.matrix[(i, j)].conj() * y[i]))
            .collect()
    }
}

/// Materialize an operator column by column (column `c` is `op(e_c)`).
pub fn materialize_operator<T: Real, A: LinearOperator<T> + ?Sized>(
    op: &A,
    adjoint: bool,
    cap: usize,
) -> Result<DMatrix<Cx<T>>> {
    let (rows, cols) = if adjoint {
        (op.dim_in(), op.dim_out())
    } else {
        (op.dim_out(), op.dim_in())
    };
    let dim = rows.max(cols);
    if dim > cap {
        return Err(Error::DenseCapExceeded { dim, cap });
    }
    let mut mat = DMatrix::from_element(rows, cols, czero());
    let mut e = vec![czero(); cols];
    for c in 0..cols {
        e[c] = Cx::new(T::one(), T::zero());
        let col = if adjoint {
            op.apply_adjoint(&e)
        } else {
            op.apply(&e)
        };
        for (r, v) in col.into_iter().enumerate() {
            mat[(r, c)] = v;
        }
        e[c] = czero();
    }
    Ok(mat)
}

/// Largest singular value via a full dense SVD in `f64`.
pub fn dense_spectral_norm<T: Real>(mat: &DMatrix<Cx<T>>) -> f64 {
    if mat.is_empty() {
        return 0.0;
    }
    let m64 = mat.map(|z| Cx::new(z.re.as_f64(), z.im.as_f64()));
    m64.singular_values().max()
}
