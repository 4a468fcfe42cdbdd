//! Sparse direct factorizations backing the state and phase-field solves.
//!
//! The saddle-point systems are factored with a sparse LU of the reduced
//! block (with a mean-zero pressure border when the boundary is pure
//! Dirichlet); the SPD phase-field systems use a sparse Cholesky.

use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};

use crate::assembly::SparseMatrix;

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("sparse factorization failed: {detail}")]
    Factorization { detail: String },
    #[error("linear solve residual {residual:e} exceeds the contract {contract:e}")]
    ResidualTooLarge { residual: f64, contract: f64 },
    #[error("pressure gauge undetermined: no Dirichlet boundary and no outlet")]
    GaugeUndetermined,
    #[error("system dimensions are inconsistent: {detail}")]
    Dimension { detail: String },
}

fn to_faer_triplets(
    entries: impl Iterator<Item = (usize, usize, f64)>,
) -> Vec<Triplet<usize, usize, f64>> {
    entries.map(|(i, j, v)| Triplet::new(i, j, v)).collect()
}

/// Scans a triplet list for structurally empty diagonals, the usual culprit
/// when a factorization breaks down.
fn first_zero_diagonal(n: usize, entries: &[Triplet<usize, usize, f64>]) -> Option<usize> {
    let mut has_diag = vec![false; n];
    for t in entries {
        if t.row == t.col && t.val != 0.0 {
            has_diag[t.row] = true;
        }
    }
    has_diag.iter().position(|d| !d)
}

/// Sparse Cholesky for symmetric positive definite systems.
pub struct CholeskySolver {
    n: usize,
    factor: faer::sparse::linalg::solvers::Llt<usize, f64>,
}

impl CholeskySolver {
    pub fn new(a: &SparseMatrix) -> Result<CholeskySolver, SolveError> {
        assert_eq!(a.nrows(), a.ncols());
        let n = a.nrows();
        let triplets = to_faer_triplets(a.triplets());
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| SolveError::Dimension {
                detail: format!("{e:?}"),
            })?;
        let factor = mat.sp_cholesky(faer::Side::Lower).map_err(|e| {
            let dof = first_zero_diagonal(n, &triplets)
                .map(|d| format!(" (dof {d} has no diagonal entry)"))
                .unwrap_or_default();
            SolveError::Factorization {
                detail: format!("{e:?}{dof}"),
            }
        })?;
        Ok(CholeskySolver { n, factor })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.n);
        let b = Mat::<f64>::from_fn(self.n, 1, |i, _| rhs[i]);
        let x = self.factor.solve(&b);
        (0..self.n).map(|i| x[(i, 0)]).collect()
    }
}

/// Sparse LU with partial pivoting for the (indefinite) saddle blocks.
pub struct LuSolver {
    n: usize,
    factor: faer::sparse::linalg::solvers::Lu<usize, f64>,
}

impl LuSolver {
    pub fn new(n: usize, entries: impl Iterator<Item = (usize, usize, f64)>) -> Result<LuSolver, SolveError> {
        let triplets = to_faer_triplets(entries);
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| SolveError::Dimension {
                detail: format!("{e:?}"),
            })?;
        let factor = mat.sp_lu().map_err(|e| {
            let dof = first_zero_diagonal(n, &triplets)
                .map(|d| format!(" (dof {d} has no diagonal entry)"))
                .unwrap_or_default();
            SolveError::Factorization {
                detail: format!("{e:?}{dof}"),
            }
        })?;
        Ok(LuSolver { n, factor })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.n);
        let b = Mat::<f64>::from_fn(self.n, 1, |i, _| rhs[i]);
        let x = self.factor.solve(&b);
        (0..self.n).map(|i| x[(i, 0)]).collect()
    }
}
