//! Density-matrix validation and the comparison matrix.
//!
//! A state is stored exactly as given; validation rejects instead of
//! repairing. Coherence is measured against the fixed computational basis,
//! so all quantities here are basis-dependent by design.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Default validation tolerance. Construction noise on normalized random
/// states is orders of magnitude below this.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum StateError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has an empty dimension")]
    EmptyMatrix,
    #[error("not Hermitian: worst |m[i][j] - conj(m[j][i])| = {worst:.3e} at ({i},{j})")]
    NotHermitian { worst: f64, i: usize, j: usize },
    #[error("not unit trace: trace = {trace_re}{trace_im:+}i, |trace - 1| = {worst:.3e}")]
    NotUnitTrace {
        trace_re: f64,
        trace_im: f64,
        worst: f64,
    },
    #[error("not positive semidefinite: smallest eigenvalue = {smallest:.3e}")]
    NotPsd { smallest: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state vector norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },
}

/// Validated d-dimensional quantum state: Hermitian, unit trace, positive
/// semidefinite, all within the stored tolerance. Entries are kept exactly
/// as supplied (no renormalization).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
    tol: f64,
}

impl DensityMatrix {
    /// Validates `entries` as a density matrix at tolerance `tol`.
    ///
    /// Checks, in order: square shape, Hermiticity, unit trace, positive
    /// semidefiniteness (every eigenvalue >= -tol). The first violated
    /// invariant is reported together with the worst offending magnitude.
    pub fn new(entries: DMatrix<Complex64>, tol: f64) -> Result<Self, StateError> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(StateError::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(StateError::EmptyMatrix);
        }
        let d = rows;

        let mut worst = 0.0_f64;
        let (mut wi, mut wj) = (0, 0);
        for i in 0..d {
            for j in i..d {
                let dev = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if dev > worst {
                    worst = dev;
                    (wi, wj) = (i, j);
                }
            }
        }
        if worst > tol {
            return Err(StateError::NotHermitian {
                worst,
                i: wi,
                j: wj,
            });
        }

        let trace: Complex64 = (0..d).map(|i| entries[(i, i)]).sum();
        let trace_dev = (trace - Complex64::new(1.0, 0.0)).norm();
        if trace_dev > tol {
            return Err(StateError::NotUnitTrace {
                trace_re: trace.re,
                trace_im: trace.im,
                worst: trace_dev,
            });
        }

        // Eigenvalues of the Hermitian part; the input is Hermitian within
        // tol, so this certifies PSD at the same tolerance.
        let herm = (&entries + entries.adjoint()).scale(0.5);
        let eig = herm.symmetric_eigen();
        let smallest = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if smallest < -tol {
            return Err(StateError::NotPsd { smallest });
        }

        Ok(Self { entries, tol })
    }

    /// Builds the projector |phi><phi| from a normalized amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64], tol: f64) -> Result<Self, StateError> {
        let d = amplitudes.len();
        if d == 0 {
            return Err(StateError::EmptyMatrix);
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq.sqrt() - 1.0).abs() > tol {
            return Err(StateError::NotNormalized {
                norm: norm_sq.sqrt(),
            });
        }
        let entries =
            DMatrix::from_fn(d, d, |i, j| amplitudes[i] * amplitudes[j].conj());
        Self::new(entries, tol)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Diagonal populations as reals.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    /// True at index i iff the population exceeds the tolerance. Indices
    /// off the support are treated as exactly zero everywhere downstream.
    pub fn support(&self) -> Vec<bool> {
        self.populations().iter().map(|&p| p > self.tol).collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries)
            .diagonal()
            .iter()
            .map(|c| c.re)
            .sum()
    }

    /// l1 norm of coherence: sum of moduli of all off-diagonal entries.
    /// Lies in [0, d-1]; zero exactly for incoherent (diagonal) states.
    pub fn l1_coherence(&self) -> f64 {
        let d = self.dim();
        let mut sum = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    sum += self.entries[(i, j)].norm();
                }
            }
        }
        sum
    }

    /// Entrywise modulus of the state; symmetric and nonnegative.
    pub fn abs_matrix(&self) -> DMatrix<f64> {
        self.entries.map(|c| c.norm())
    }

    /// Diagonal of the dephased state raised to the power -1/2, with
    /// populations at or below tol mapped to exactly 0.
    pub fn inv_sqrt_dephased(&self) -> DMatrix<f64> {
        let pops = self.populations();
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j && pops[i] > self.tol {
                1.0 / pops[i].sqrt()
            } else {
                0.0
            }
        })
    }

    /// The comparison matrix A with A[i][j] = |rho_ij| / sqrt(rho_ii rho_jj)
    /// on the support and 0 elsewhere. Its largest eigenvalue minus one is
    /// the maximal reachable coherence.
    pub fn comparison_matrix(&self) -> ComparisonMatrix {
        let d = self.dim();
        let pops = self.populations();
        let support = self.support();
        let mut a = DMatrix::zeros(d, d);
        for i in 0..d {
            if !support[i] {
                continue;
            }
            a[(i, i)] = 1.0;
            for j in (i + 1)..d {
                if !support[j] {
                    continue;
                }
                // PSD bounds the true ratio by 1; anything above is roundoff.
                let v = (self.entries[(i, j)].norm() / (pops[i] * pops[j]).sqrt()).min(1.0);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        ComparisonMatrix {
            entries: a,
            support,
        }
    }
}

/// Real nonnegative symmetric matrix built from a validated state, with
/// unit diagonal on the support and zero rows/columns off it.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonMatrix {
    entries: DMatrix<f64>,
    support: Vec<bool>,
}

impl ComparisonMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn support(&self) -> &[bool] {
        &self.support
    }

    /// Principal submatrix on the given index set.
    pub fn submatrix(&self, indices: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(indices.len(), indices.len(), |i, j| {
            self.entries[(indices[i], indices[j])]
        })
    }
}

/// Convenience constructor for diagonal (incoherent) states.
pub fn diagonal_state(populations: &[f64], tol: f64) -> Result<DensityMatrix, StateError> {
    let d = populations.len();
    let entries = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(populations[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    DensityMatrix::new(entries, tol)
}

/// Largest entrywise modulus of the difference of two complex matrices.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qubit(r: f64, theta: f64) -> DensityMatrix {
        let entries = DMatrix::from_row_slice(
            2,
            2,
            &[
                c(0.5 * (1.0 + r * theta.cos()), 0.0),
                c(0.5 * r * theta.sin(), 0.0),
                c(0.5 * r * theta.sin(), 0.0),
                c(0.5 * (1.0 - r * theta.cos()), 0.0),
            ],
        );
        DensityMatrix::new(entries, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn maximally_mixed_qubit_is_valid() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        let rho = DensityMatrix::new(m, DEFAULT_TOL).unwrap();
        assert_eq!(rho.dim(), 2);
        assert_relative_eq!(rho.purity(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn indefinite_matrix_is_rejected_as_not_psd() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.6, 0.0), c(0.6, 0.0), c(0.5, 0.0)]);
        match DensityMatrix::new(m, DEFAULT_TOL) {
            Err(StateError::NotPsd { smallest }) => {
                assert_relative_eq!(smallest, -0.1, epsilon = 1e-12)
            }
            other => panic!("expected NotPsd, got {other:?}"),
        }
    }

    #[test]
    fn conjugate_mismatch_is_rejected_as_not_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.5), c(0.0, 0.5), c(0.5, 0.0)]);
        assert!(matches!(
            DensityMatrix::new(m, DEFAULT_TOL),
            Err(StateError::NotHermitian { .. })
        ));
    }

    #[test]
    fn wrong_trace_is_rejected_without_repair() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.4, 0.0)]);
        match DensityMatrix::new(m, DEFAULT_TOL) {
            Err(StateError::NotUnitTrace { worst, .. }) => {
                assert_relative_eq!(worst, 0.1, epsilon = 1e-12)
            }
            other => panic!("expected NotUnitTrace, got {other:?}"),
        }
    }

    #[test]
    fn l1_coherence_of_incoherent_state_is_zero() {
        let rho = diagonal_state(&[0.5, 0.5], DEFAULT_TOL).unwrap();
        assert_eq!(rho.l1_coherence(), 0.0);
    }

    #[test]
    fn l1_coherence_of_maximally_coherent_qubit_is_one() {
        let rho = qubit(1.0, std::f64::consts::FRAC_PI_2);
        assert_relative_eq!(rho.l1_coherence(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn l1_coherence_of_parameterized_qubit() {
        let theta = std::f64::consts::PI / 3.0;
        let rho = qubit(0.8, theta);
        assert_relative_eq!(rho.l1_coherence(), 0.8 * theta.sin(), epsilon = 1e-12);
    }

    #[test]
    fn abs_matrix_strips_signs_and_phases() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(-0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0)]);
        let rho = DensityMatrix::new(m, DEFAULT_TOL).unwrap();
        let a = rho.abs_matrix();
        assert_eq!(a, DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]));

        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.3), c(0.0, -0.3), c(0.5, 0.0)]);
        let rho = DensityMatrix::new(m, DEFAULT_TOL).unwrap();
        let a = rho.abs_matrix();
        assert_relative_eq!(a[(0, 1)], 0.3, epsilon = 1e-15);
        assert_relative_eq!(a[(1, 0)], 0.3, epsilon = 1e-15);
    }

    #[test]
    fn inv_sqrt_dephased_componentwise_power() {
        let rho = diagonal_state(&[0.25, 0.75], DEFAULT_TOL).unwrap();
        let s = rho.inv_sqrt_dephased();
        assert_relative_eq!(s[(0, 0)], 2.0, epsilon = 1e-15);
        assert_relative_eq!(s[(1, 1)], 1.0 / 0.75_f64.sqrt(), epsilon = 1e-15);
        assert_eq!(s[(0, 1)], 0.0);
    }

    #[test]
    fn inv_sqrt_dephased_zero_population_maps_to_zero() {
        let rho = diagonal_state(&[1.0, 0.0], DEFAULT_TOL).unwrap();
        let s = rho.inv_sqrt_dephased();
        assert_eq!(s[(0, 0)], 1.0);
        assert_eq!(s[(1, 1)], 0.0);

        let rho = diagonal_state(&[0.5, 0.5], DEFAULT_TOL).unwrap();
        let s = rho.inv_sqrt_dephased();
        assert_relative_eq!(s[(0, 0)], 2.0_f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(s[(1, 1)], 2.0_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn comparison_matrix_of_parameterized_qubit() {
        let (r, theta) = (0.8, std::f64::consts::PI / 3.0);
        let rho = qubit(r, theta);
        let a = rho.comparison_matrix();
        let expected = r * theta.sin().abs() / (1.0 - r * r * theta.cos() * theta.cos()).sqrt();
        assert_eq!(a.entries()[(0, 0)], 1.0);
        assert_eq!(a.entries()[(1, 1)], 1.0);
        assert_relative_eq!(a.entries()[(0, 1)], expected, epsilon = 1e-14);
        assert_relative_eq!(a.entries()[(1, 0)], expected, epsilon = 1e-14);
    }

    #[test]
    fn comparison_matrix_of_full_support_pure_state_is_all_ones() {
        let amps: Vec<Complex64> = [0.5_f64, 0.3, 0.2]
            .iter()
            .map(|p| c(p.sqrt(), 0.0))
            .collect();
        let rho = DensityMatrix::from_pure(&amps, DEFAULT_TOL).unwrap();
        let a = rho.comparison_matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(a.entries()[(i, j)], 1.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn comparison_matrix_of_incoherent_state_is_identity_on_support() {
        let rho = diagonal_state(&[0.3, 0.7], DEFAULT_TOL).unwrap();
        let a = rho.comparison_matrix();
        assert_eq!(a.entries(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn support_projector_identity() {
        // inv_sqrt_dephased . dephase . inv_sqrt_dephased is the 0/1
        // projector onto the support.
        let rho = diagonal_state(&[0.6, 0.0, 0.4], DEFAULT_TOL).unwrap();
        let s = rho.inv_sqrt_dephased();
        let dephased = DMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                rho.populations()[i]
            } else {
                0.0
            }
        });
        let proj = &s * dephased * &s;
        for i in 0..3 {
            let expected = if rho.support()[i] { 1.0 } else { 0.0 };
            assert_relative_eq!(proj[(i, i)], expected, epsilon = 1e-14);
        }
    }
}
