//! Strictly incoherent Kraus operators and the channels they generate.
//!
//! A Kraus operator is strictly incoherent when every row and every column
//! carries at most one entry above tolerance; such operators map diagonal
//! states to diagonal states in both directions. A subset of them defines a
//! stochastic sub-channel realized with probability Tr(sum K rho K').

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::state::{DensityMatrix, StateError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ChannelError {
    #[error("operator dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty Kraus set")]
    EmptySet,
    #[error("Kraus set not subnormalized: largest eigenvalue of sum K'K exceeds 1 by {excess:.3e}")]
    NotSubnormalized { excess: f64 },
    #[error("total channel probability {total:.3e} at or below tolerance")]
    ZeroProbability { total: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

/// A d x d complex Kraus operator.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausOperator {
    entries: DMatrix<Complex64>,
}

impl KrausOperator {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self, ChannelError> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(ChannelError::NotSquare { rows, cols });
        }
        Ok(Self { entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            entries: DMatrix::zeros(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let d = diag.len();
        Self {
            entries: DMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    diag[i]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// True iff every row and every column has at most one entry with
    /// modulus above `tol`.
    pub fn is_strictly_incoherent(&self, tol: f64) -> bool {
        let d = self.dim();
        for i in 0..d {
            let in_row = (0..d).filter(|&j| self.entries[(i, j)].norm() > tol).count();
            let in_col = (0..d).filter(|&j| self.entries[(j, i)].norm() > tol).count();
            if in_row > 1 || in_col > 1 {
                return false;
            }
        }
        true
    }
}

/// Ordered set of equal-dimension Kraus operators with
/// sum K' K <= I (largest eigenvalue at most 1 + tol at construction).
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<KrausOperator>,
    dim: usize,
}

impl KrausSet {
    pub fn new(operators: Vec<KrausOperator>, tol: f64) -> Result<Self, ChannelError> {
        let dim = operators.first().ok_or(ChannelError::EmptySet)?.dim();
        for op in &operators {
            if op.dim() != dim {
                return Err(ChannelError::DimensionMismatch {
                    expected: dim,
                    got: op.dim(),
                });
            }
        }
        let set = Self { operators, dim };
        let top = largest_hermitian_eigenvalue(&set.gram());
        if top > 1.0 + tol {
            return Err(ChannelError::NotSubnormalized { excess: top - 1.0 });
        }
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[KrausOperator] {
        &self.operators
    }

    /// sum over operators of K' K.
    pub fn gram(&self) -> DMatrix<Complex64> {
        let mut g = DMatrix::zeros(self.dim, self.dim);
        for op in &self.operators {
            g += op.entries.adjoint() * &op.entries;
        }
        g
    }

    /// Worst entrywise deviation of the gram matrix from the identity;
    /// zero (within tolerance) for a trace-preserving instrument.
    pub fn completeness_deviation(&self) -> f64 {
        let g = self.gram();
        let id: DMatrix<Complex64> = DMatrix::identity(self.dim, self.dim);
        (g - id).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Extends the set with the single failure operator
    /// F = (I - sum K'K)^(1/2), making it trace preserving. When the gram
    /// matrix is diagonal, F is diagonal and hence strictly incoherent.
    pub fn complete(&self) -> KrausSet {
        let d = self.dim;
        let gram = self.gram();
        let mut remainder = DMatrix::<Complex64>::identity(d, d);
        remainder -= &gram;

        let off_diag_zero = (0..d).all(|i| {
            (0..d).all(|j| i == j || remainder[(i, j)] == Complex64::new(0.0, 0.0))
        });

        let failure = if off_diag_zero {
            let diag: Vec<Complex64> = (0..d)
                .map(|i| Complex64::new(remainder[(i, i)].re.max(0.0).sqrt(), 0.0))
                .collect();
            KrausOperator::from_diagonal(&diag)
        } else {
            // Principal square root of the Hermitian remainder; eigenvalues
            // below zero (at most tol in magnitude by subnormalization) are
            // clamped.
            let herm = (&remainder + remainder.adjoint()).scale(0.5);
            let eig = herm.symmetric_eigen();
            let mut sqrt_diag = DMatrix::<Complex64>::zeros(d, d);
            for (i, &ev) in eig.eigenvalues.iter().enumerate() {
                let clamped = if ev < 0.0 { 0.0 } else { ev };
                sqrt_diag[(i, i)] = Complex64::new(clamped.sqrt(), 0.0);
            }
            let v = eig.eigenvectors;
            let entries = &v * sqrt_diag * v.adjoint();
            KrausOperator { entries }
        };

        let mut operators = self.operators.clone();
        operators.push(failure);
        KrausSet {
            operators,
            dim: d,
        }
    }
}

/// Post-measurement branch: outcome probability and renormalized state.
#[derive(Debug, Clone)]
pub struct SelectiveOutcome {
    pub probability: f64,
    pub state: DensityMatrix,
}

fn conjugate(op: &KrausOperator, rho: &DensityMatrix) -> DMatrix<Complex64> {
    op.entries() * rho.entries() * op.entries().adjoint()
}

fn trace_re(m: &DMatrix<Complex64>) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].re).sum()
}

/// Applies each operator selectively, emitting one outcome per operator
/// whose branch probability exceeds the state's tolerance. Branches with
/// K rho K' = 0 are omitted rather than emitted with zero probability.
pub fn apply_selective(
    rho: &DensityMatrix,
    ks: &KrausSet,
) -> Result<Vec<SelectiveOutcome>, ChannelError> {
    if ks.dim() != rho.dim() {
        return Err(ChannelError::DimensionMismatch {
            expected: rho.dim(),
            got: ks.dim(),
        });
    }
    let tol = rho.tol();
    let mut outcomes = Vec::new();
    for op in ks.operators() {
        let m = conjugate(op, rho);
        let p = trace_re(&m);
        if p > tol {
            let state = DensityMatrix::new(m.unscale(p), tol)?;
            outcomes.push(SelectiveOutcome {
                probability: p,
                state,
            });
        }
    }
    Ok(outcomes)
}

/// Applies the whole subset as one stochastic operation: returns the
/// success probability P = Tr(sum K rho K') and the renormalized state.
pub fn apply_stochastic(
    rho: &DensityMatrix,
    ks: &KrausSet,
) -> Result<(f64, DensityMatrix), ChannelError> {
    if ks.dim() != rho.dim() {
        return Err(ChannelError::DimensionMismatch {
            expected: rho.dim(),
            got: ks.dim(),
        });
    }
    let tol = rho.tol();
    let mut total = DMatrix::<Complex64>::zeros(rho.dim(), rho.dim());
    for op in ks.operators() {
        total += conjugate(op, rho);
    }
    let p = trace_re(&total);
    if p <= tol {
        return Err(ChannelError::ZeroProbability { total: p });
    }
    let state = DensityMatrix::new(total.unscale(p), tol)?;
    Ok((p, state))
}

pub(crate) fn largest_hermitian_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    let herm = (m + m.adjoint()).scale(0.5);
    herm.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}
