//! Maximal coherence enhancement under stochastic strictly incoherent
//! operations.
//!
//! The pipeline: decompose the state into irreducible blocks by permutation
//! (connected components of the off-diagonal support graph), solve each
//! block's comparison matrix for its Perron root and vector, and assemble
//! the maximal reachable coherence, the maximal success probability, and
//! the diagonal Kraus operator that attains both.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::channel::KrausOperator;
use crate::state::{DensityMatrix, StateError};

/// Power-iteration stopping rule: relative residual |Av - lv| <= tol * l.
pub const PERRON_CONV_TOL: f64 = 1e-12;
pub const PERRON_MAX_ITER: usize = 100_000;
/// Two blocks share the top eigenvalue when their Perron roots agree to
/// this absolute tolerance. Honest ties land within solver noise (~1e-15);
/// distinct random-state roots are macroscopically separated.
pub const LAMBDA_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EnhanceError {
    #[error("power iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("parameter {name} = {value} outside its admissible range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

/// One irreducible component of a state: its original basis indices, its
/// probability weight, and the renormalized block state.
#[derive(Debug, Clone)]
pub struct StateBlock {
    pub indices: Vec<usize>,
    pub weight: f64,
    pub state: DensityMatrix,
}

/// Permutation-similarity decomposition of a state into irreducible blocks
/// plus the zero-population sector.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub dim: usize,
    pub blocks: Vec<StateBlock>,
    pub zero_sector: Vec<usize>,
    /// Position in the block direct sum -> original basis index.
    pub permutation: Vec<usize>,
}

impl BlockDecomposition {
    /// Rebuilds the original matrix from the weighted block direct sum.
    pub fn reassemble(&self) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for block in &self.blocks {
            let w = Complex64::new(block.weight, 0.0);
            for (i, &gi) in block.indices.iter().enumerate() {
                for (j, &gj) in block.indices.iter().enumerate() {
                    out[(gi, gj)] = w * block.state.entries()[(i, j)];
                }
            }
        }
        out
    }
}

/// Dominant eigenpair of a nonnegative matrix, with solver diagnostics.
#[derive(Debug, Clone)]
pub struct PerronData {
    pub lambda: f64,
    pub vector: DVector<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Per-block slice of an [`EnhancementResult`].
#[derive(Debug, Clone)]
pub struct BlockReport {
    pub indices: Vec<usize>,
    pub weight: f64,
    pub lambda: f64,
    pub phi: Vec<f64>,
    pub block_p_max: f64,
}

/// Complete optimizer output for one state: input and maximal
/// coherence, maximal success probability, per-block Perron data, and the
/// optimal Kraus operator with its trace-preserving completion.
#[derive(Debug, Clone)]
pub struct EnhancementResult {
    pub c_input: f64,
    pub c_max: f64,
    pub p_max: f64,
    pub blocks: Vec<BlockReport>,
    pub winning_blocks: Vec<usize>,
    pub kraus: KrausOperator,
    pub failure: KrausOperator,
}

/// Splits the state into connected components of its off-diagonal support
/// graph, restricted to indices with population above tolerance. Blocks are
/// ordered by their smallest original index; zero-population indices form
/// the zero sector.
pub fn block_decompose(rho: &DensityMatrix) -> Result<BlockDecomposition, EnhanceError> {
    let d = rho.dim();
    let tol = rho.tol();
    let support = rho.support();
    let abs = rho.abs_matrix();
    let pops = rho.populations();

    let mut assigned = vec![false; d];
    let mut blocks = Vec::new();
    let mut zero_sector = Vec::new();
    for start in 0..d {
        if assigned[start] {
            continue;
        }
        if !support[start] {
            zero_sector.push(start);
            assigned[start] = true;
            continue;
        }
        let mut component = vec![start];
        let mut queue = vec![start];
        assigned[start] = true;
        while let Some(i) = queue.pop() {
            for j in 0..d {
                if !assigned[j] && support[j] && abs[(i, j)] > tol {
                    assigned[j] = true;
                    component.push(j);
                    queue.push(j);
                }
            }
        }
        component.sort_unstable();

        let weight: f64 = component.iter().map(|&i| pops[i]).sum();
        let entries = DMatrix::from_fn(component.len(), component.len(), |i, j| {
            rho.entries()[(component[i], component[j])] / Complex64::new(weight, 0.0)
        });
        let state = DensityMatrix::new(entries, tol)?;
        blocks.push(StateBlock {
            indices: component,
            weight,
            state,
        });
    }

    let mut permutation: Vec<usize> = blocks.iter().flat_map(|b| b.indices.clone()).collect();
    permutation.extend(&zero_sector);
    Ok(BlockDecomposition {
        dim: d,
        blocks,
        zero_sector,
        permutation,
    })
}

/// Power iteration for the Perron root and vector of a symmetric
/// nonnegative matrix with unit diagonal (hence primitive when
/// irreducible). Starts from the uniform vector; the iterate stays
/// strictly positive throughout.
pub fn perron(
    a: &DMatrix<f64>,
    conv_tol: f64,
    max_iter: usize,
) -> Result<PerronData, EnhanceError> {
    let d = a.nrows();
    assert_eq!(d, a.ncols(), "perron expects a square matrix");
    assert!(d > 0, "perron expects a nonempty matrix");

    let mut v = DVector::from_element(d, 1.0 / (d as f64).sqrt());
    let mut residual = f64::INFINITY;
    for iteration in 1..=max_iter {
        let w = a * &v;
        let lambda = v.dot(&w);
        residual = (&w - &v * lambda).norm();
        if residual <= conv_tol * lambda {
            return Ok(PerronData {
                lambda,
                vector: v,
                iterations: iteration,
                residual,
            });
        }
        let norm = w.norm();
        if norm == 0.0 {
            // Unreachable for unit-diagonal input; bail out rather than NaN.
            return Err(EnhanceError::NoConvergence {
                iterations: iteration,
                residual,
            });
        }
        v = w.unscale(norm);
    }
    Err(EnhanceError::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// Full enhancement pipeline on a validated state.
pub fn analyze(rho: &DensityMatrix) -> Result<EnhancementResult, EnhanceError> {
    let d = rho.dim();
    let c_input = rho.l1_coherence();
    let decomposition = block_decompose(rho)?;
    let cmp = rho.comparison_matrix();

    let mut reports = Vec::with_capacity(decomposition.blocks.len());
    for block in &decomposition.blocks {
        let a = cmp.submatrix(&block.indices);
        let pd = perron(&a, PERRON_CONV_TOL, PERRON_MAX_ITER)?;
        let pops = block.state.populations();
        let block_p_max = pops
            .iter()
            .zip(pd.vector.iter())
            .map(|(&p, &phi)| p / (phi * phi))
            .fold(f64::INFINITY, f64::min);
        reports.push(BlockReport {
            indices: block.indices.clone(),
            weight: block.weight,
            lambda: pd.lambda,
            phi: pd.vector.iter().copied().collect(),
            block_p_max,
        });
    }

    let lambda_max = reports
        .iter()
        .map(|r| r.lambda)
        .fold(f64::NEG_INFINITY, f64::max);
    let winning_blocks: Vec<usize> = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| r.lambda >= lambda_max - LAMBDA_TIE_TOL)
        .map(|(i, _)| i)
        .collect();

    let c_max = lambda_max - 1.0;
    let p_max: f64 = winning_blocks
        .iter()
        .map(|&i| reports[i].weight * reports[i].block_p_max)
        .sum();

    // Optimal operator: per winning block the saturated scale k = sqrt(P_a)
    // times diag(phi_i / sqrt(pop_i)); losing blocks and the zero sector
    // stay zero so nothing dilutes the output mixture.
    let mut diag = vec![Complex64::new(0.0, 0.0); d];
    for &bi in &winning_blocks {
        let report = &reports[bi];
        let pops = decomposition.blocks[bi].state.populations();
        let scale = report.block_p_max.sqrt();
        for (i, &gi) in report.indices.iter().enumerate() {
            diag[gi] = Complex64::new(scale * report.phi[i] / pops[i].sqrt(), 0.0);
        }
    }
    let kraus = KrausOperator::from_diagonal(&diag);
    let failure_diag: Vec<Complex64> = diag
        .iter()
        .map(|c| Complex64::new((1.0 - c.norm_sqr()).max(0.0).sqrt(), 0.0))
        .collect();
    let failure = KrausOperator::from_diagonal(&failure_diag);

    Ok(EnhancementResult {
        c_input,
        c_max,
        p_max,
        blocks: reports,
        winning_blocks,
        kraus,
        failure,
    })
}

/// Largest eigenvalue of the comparison matrix minus one: the maximal
/// l1 coherence reachable by any stochastic strictly incoherent operation.
pub fn max_enhanced_coherence(rho: &DensityMatrix) -> Result<f64, EnhanceError> {
    Ok(analyze(rho)?.c_max)
}

/// Maximal probability of actually reaching [`max_enhanced_coherence`]:
/// the weighted sum of min_i pop_i / phi_i^2 over the top-eigenvalue blocks.
pub fn max_probability(rho: &DensityMatrix) -> Result<f64, EnhanceError> {
    Ok(analyze(rho)?.p_max)
}

/// The optimal strictly incoherent Kraus operator (diagonal representative)
/// and its trace-preserving completion.
pub fn optimal_kraus(rho: &DensityMatrix) -> Result<(KrausOperator, KrausOperator), EnhanceError> {
    let result = analyze(rho)?;
    Ok((result.kraus, result.failure))
}

/// Pure-state fast path: with r nonzero components the maximal coherence is
/// r - 1; when all components are nonzero the success probability is
/// d * min_i |amp_i|^2, otherwise the general pipeline value on the
/// reduced support.
pub fn pure_state_analysis(
    amplitudes: &[Complex64],
    tol: f64,
) -> Result<(f64, f64), EnhanceError> {
    let d = amplitudes.len();
    let rho = DensityMatrix::from_pure(amplitudes, tol)?;
    let nonzero = amplitudes.iter().filter(|a| a.norm() > tol).count();
    let c_max = nonzero as f64 - 1.0;
    let p_max = if nonzero == d {
        let min_sq = amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .fold(f64::INFINITY, f64::min);
        d as f64 * min_sq
    } else {
        max_probability(&rho)?
    };
    Ok((c_max, p_max))
}

fn check_qubit_params(r: f64, theta: f64) -> Result<(), EnhanceError> {
    if !(r > 0.0 && r <= 1.0) || !r.is_finite() {
        return Err(EnhanceError::OutOfRange {
            name: "r",
            value: r,
        });
    }
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(EnhanceError::OutOfRange {
            name: "theta",
            value: theta,
        });
    }
    Ok(())
}

/// Closed forms for the Bloch-parameterized qubit with 0 < r <= 1 and
/// 0 < theta < pi: input coherence r|sin t|, maximal coherence
/// r|sin t| / sqrt(1 - r^2 cos^2 t), success probability 1 - r|cos t|.
pub fn qubit_closed_form(r: f64, theta: f64) -> Result<(f64, f64, f64), EnhanceError> {
    check_qubit_params(r, theta)?;
    let c_input = r * theta.sin().abs();
    let c_max = c_input / (1.0 - r * r * theta.cos() * theta.cos()).sqrt();
    let p_max = 1.0 - r * theta.cos().abs();
    Ok((c_input, c_max, p_max))
}

/// Builds the Bloch-parameterized qubit state itself.
pub fn qubit_state(
    r: f64,
    theta: f64,
    phase: f64,
    tol: f64,
) -> Result<DensityMatrix, EnhanceError> {
    check_qubit_params(r, theta)?;
    let off = Complex64::new(0.0, -phase).exp() * (0.5 * r * theta.sin());
    let entries = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (1.0 + r * theta.cos()), 0.0),
            off,
            off.conj(),
            Complex64::new(0.5 * (1.0 - r * theta.cos()), 0.0),
        ],
    );
    Ok(DensityMatrix::new(entries, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_stochastic, KrausSet};
    use crate::state::{diagonal_state, max_abs_diff, DEFAULT_TOL};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus_state() -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)])
    }

    #[test]
    fn qubit_decomposes_into_single_block() {
        let rho = qubit_state(0.8, PI / 3.0, 0.0, DEFAULT_TOL).unwrap();
        let decomp = block_decompose(&rho).unwrap();
        assert_eq!(decomp.blocks.len(), 1);
        assert!(decomp.zero_sector.is_empty());
        assert_eq!(decomp.blocks[0].indices, vec![0, 1]);
        assert_relative_eq!(decomp.blocks[0].weight, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn incoherent_state_decomposes_into_singletons() {
        let rho = diagonal_state(&[0.3, 0.7], DEFAULT_TOL).unwrap();
        let decomp = block_decompose(&rho).unwrap();
        assert_eq!(decomp.blocks.len(), 2);
        assert_relative_eq!(decomp.blocks[0].weight, 0.3, epsilon = 1e-15);
        assert_relative_eq!(decomp.blocks[1].weight, 0.7, epsilon = 1e-15);
    }

    #[test]
    fn constructed_direct_sum_is_recovered() {
        // 0.5 rho+ directsum 0.5 rho+ : two 2-dim blocks, both maximally
        // coherent.
        let mut entries = DMatrix::zeros(4, 4);
        for b in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    entries[(2 * b + i, 2 * b + j)] = c(0.25, 0.0);
                }
            }
        }
        let rho = DensityMatrix::new(entries, DEFAULT_TOL).unwrap();
        let decomp = block_decompose(&rho).unwrap();
        assert_eq!(decomp.blocks.len(), 2);
        for block in &decomp.blocks {
            assert_relative_eq!(block.weight, 0.5, epsilon = 1e-12);
            assert!(max_abs_diff(block.state.entries(), &plus_state()) < 1e-12);
        }
        assert!(max_abs_diff(&decomp.reassemble(), rho.entries()) < 1e-12);
    }

    #[test]
    fn zero_population_indices_form_zero_sector() {
        let mut entries = DMatrix::zeros(3, 3);
        entries[(0, 0)] = c(0.5, 0.0);
        entries[(0, 1)] = c(0.5, 0.0);
        entries[(1, 0)] = c(0.5, 0.0);
        entries[(1, 1)] = c(0.5, 0.0);
        let rho = DensityMatrix::new(entries, DEFAULT_TOL).unwrap();
        let decomp = block_decompose(&rho).unwrap();
        assert_eq!(decomp.blocks.len(), 1);
        assert_eq!(decomp.zero_sector, vec![2]);
        assert_eq!(decomp.permutation, vec![0, 1, 2]);
    }

    #[test]
    fn perron_of_rank_one_all_ones() {
        let a = DMatrix::from_element(2, 2, 1.0);
        let pd = perron(&a, PERRON_CONV_TOL, PERRON_MAX_ITER).unwrap();
        assert_relative_eq!(pd.lambda, 2.0, epsilon = 1e-12);
        assert_relative_eq!(pd.vector[0], 1.0 / 2.0_f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(pd.vector[1], 1.0 / 2.0_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn perron_of_qubit_comparison_matrix() {
        let (r, theta) = (0.8, PI / 3.0);
        let rho = qubit_state(r, theta, 0.0, DEFAULT_TOL).unwrap();
        let a = rho.comparison_matrix();
        let pd = perron(a.entries(), PERRON_CONV_TOL, PERRON_MAX_ITER).unwrap();
        let expected = 1.0 + r * theta.sin() / (1.0 - r * r * theta.cos() * theta.cos()).sqrt();
        assert_relative_eq!(pd.lambda, expected, epsilon = 1e-11);
        assert_relative_eq!(pd.vector[0], pd.vector[1], epsilon = 1e-11);
    }

    #[test]
    fn perron_of_all_ones_is_dimension() {
        for d in 2..=6 {
            let a = DMatrix::from_element(d, d, 1.0);
            let pd = perron(&a, PERRON_CONV_TOL, PERRON_MAX_ITER).unwrap();
            assert_relative_eq!(pd.lambda, d as f64, epsilon = 1e-11);
            for i in 0..d {
                assert_relative_eq!(pd.vector[i], 1.0 / (d as f64).sqrt(), epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn perron_reports_no_convergence_when_starved() {
        // Perron vector far from uniform, so one iteration cannot reach the
        // residual target.
        let a = DMatrix::from_row_slice(
            3,
            3,
            &[1.0, 0.9, 0.1, 0.9, 1.0, 0.5, 0.1, 0.5, 1.0],
        );
        match perron(&a, 1e-15, 1) {
            Err(EnhanceError::NoConvergence { iterations, .. }) => assert_eq!(iterations, 1),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn qubit_max_coherence_matches_closed_form() {
        let (r, theta) = (0.8, PI / 3.0);
        let rho = qubit_state(r, theta, 0.0, DEFAULT_TOL).unwrap();
        let expected = r * theta.sin() / (1.0 - r * r * theta.cos() * theta.cos()).sqrt();
        assert_relative_eq!(
            max_enhanced_coherence(&rho).unwrap(),
            expected,
            epsilon = 1e-11
        );
        assert_relative_eq!(max_probability(&rho).unwrap(), 0.6, epsilon = 1e-11);
    }

    #[test]
    fn full_support_pure_state_reaches_dimension_minus_one() {
        let amps: Vec<Complex64> = [0.5_f64, 0.3, 0.2]
            .iter()
            .map(|p| c(p.sqrt(), 0.0))
            .collect();
        let rho = DensityMatrix::from_pure(&amps, DEFAULT_TOL).unwrap();
        assert_relative_eq!(max_enhanced_coherence(&rho).unwrap(), 2.0, epsilon = 1e-10);
        assert_relative_eq!(max_probability(&rho).unwrap(), 0.6, epsilon = 1e-10);
    }

    #[test]
    fn incoherent_state_cannot_be_enhanced() {
        let rho = diagonal_state(&[0.3, 0.7], DEFAULT_TOL).unwrap();
        let result = analyze(&rho).unwrap();
        assert_eq!(result.c_input, 0.0);
        assert_relative_eq!(result.c_max, 0.0, epsilon = 1e-12);
        assert_relative_eq!(result.p_max, 1.0, epsilon = 1e-12);
        assert!(max_abs_diff(result.kraus.entries(), &DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn maximally_coherent_state_keeps_identity_kraus() {
        let rho = DensityMatrix::new(plus_state(), DEFAULT_TOL).unwrap();
        let result = analyze(&rho).unwrap();
        assert_relative_eq!(result.c_max, 1.0, epsilon = 1e-11);
        assert_relative_eq!(result.p_max, 1.0, epsilon = 1e-11);
        assert!(max_abs_diff(result.kraus.entries(), &DMatrix::identity(2, 2)) < 1e-8);
        assert!(result.failure.entries().iter().all(|c| c.norm() < 1e-7));
    }

    #[test]
    fn optimal_kraus_matches_qubit_closed_form() {
        let (r, theta) = (0.8, PI / 3.0);
        let rho = qubit_state(r, theta, 0.0, DEFAULT_TOL).unwrap();
        let (kraus, failure) = optimal_kraus(&rho).unwrap();
        let scale = (1.0 - r * theta.cos().abs()).sqrt();
        let expected_0 = scale / (1.0 + r * theta.cos()).sqrt();
        let expected_1 = scale / (1.0 - r * theta.cos()).sqrt();
        assert_relative_eq!(kraus.entries()[(0, 0)].re, expected_0, epsilon = 1e-11);
        assert_relative_eq!(kraus.entries()[(1, 1)].re, expected_1, epsilon = 1e-11);
        assert!(kraus.is_strictly_incoherent(DEFAULT_TOL));

        // F completes the instrument: F'F = I - K''K'.
        let gram = kraus.entries().adjoint() * kraus.entries()
            + failure.entries().adjoint() * failure.entries();
        assert!(max_abs_diff(&gram, &DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn pure_state_kraus_scales_by_the_smallest_population() {
        let amps: Vec<Complex64> = [0.5_f64, 0.3, 0.2]
            .iter()
            .map(|p| c(p.sqrt(), 0.0))
            .collect();
        let rho = DensityMatrix::from_pure(&amps, DEFAULT_TOL).unwrap();
        let (kraus, _) = optimal_kraus(&rho).unwrap();
        for (i, p) in [0.5, 0.3, 0.2].iter().enumerate() {
            assert_relative_eq!(
                kraus.entries()[(i, i)].re,
                (0.2_f64 / p).sqrt(),
                epsilon = 1e-9
            );
        }
        // Success branch is the maximally coherent state.
        let ks = KrausSet::new(vec![kraus], DEFAULT_TOL).unwrap();
        let (p, out) = apply_stochastic(&rho, &ks).unwrap();
        assert_relative_eq!(p, 0.6, epsilon = 1e-10);
        assert_relative_eq!(out.l1_coherence(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_blocks_sum_their_probabilities() {
        let mut entries = DMatrix::zeros(4, 4);
        for b in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    entries[(2 * b + i, 2 * b + j)] = c(0.25, 0.0);
                }
            }
        }
        let rho = DensityMatrix::new(entries, DEFAULT_TOL).unwrap();
        let result = analyze(&rho).unwrap();
        assert_eq!(result.winning_blocks, vec![0, 1]);
        assert_relative_eq!(result.c_max, 1.0, epsilon = 1e-11);
        assert_relative_eq!(result.p_max, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn analyze_bundle_is_consistent_on_qubit() {
        let (r, theta) = (0.8, PI / 3.0);
        let rho = qubit_state(r, theta, 0.0, DEFAULT_TOL).unwrap();
        let result = analyze(&rho).unwrap();
        let (ci, cm, pm) = qubit_closed_form(r, theta).unwrap();
        assert_relative_eq!(result.c_input, ci, epsilon = 1e-12);
        assert_relative_eq!(result.c_max, cm, epsilon = 1e-11);
        assert_relative_eq!(result.p_max, pm, epsilon = 1e-11);
        assert_eq!(result.blocks.len(), 1);
        assert_eq!(result.winning_blocks, vec![0]);
    }

    #[test]
    fn pure_state_analysis_reference_values() {
        let d = 4;
        let uniform: Vec<Complex64> = (0..d)
            .map(|_| c(1.0 / (d as f64).sqrt(), 0.0))
            .collect();
        let (cmax, pmax) = pure_state_analysis(&uniform, DEFAULT_TOL).unwrap();
        assert_relative_eq!(cmax, (d - 1) as f64, epsilon = 1e-12);
        assert_relative_eq!(pmax, 1.0, epsilon = 1e-11);

        let amps: Vec<Complex64> = [0.5_f64, 0.3, 0.2]
            .iter()
            .map(|p| c(p.sqrt(), 0.0))
            .collect();
        let (cmax, pmax) = pure_state_analysis(&amps, DEFAULT_TOL).unwrap();
        assert_relative_eq!(cmax, 2.0, epsilon = 1e-12);
        assert_relative_eq!(pmax, 0.6, epsilon = 1e-12);

        let amps = vec![c(0.5_f64.sqrt(), 0.0), c(0.5_f64.sqrt(), 0.0), c(0.0, 0.0)];
        let (cmax, pmax) = pure_state_analysis(&amps, DEFAULT_TOL).unwrap();
        assert_relative_eq!(cmax, 1.0, epsilon = 1e-12);
        assert_relative_eq!(pmax, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn qubit_closed_form_examples() {
        let (ci, cm, pm) = qubit_closed_form(1.0, PI / 2.0).unwrap();
        assert_relative_eq!(ci, 1.0, epsilon = 1e-12);
        assert_relative_eq!(cm, 1.0, epsilon = 1e-12);
        assert_relative_eq!(pm, 1.0, epsilon = 1e-12);

        let (ci, cm, pm) = qubit_closed_form(0.8, PI / 3.0).unwrap();
        assert_relative_eq!(ci, 0.8 * (PI / 3.0).sin(), epsilon = 1e-12);
        assert_relative_eq!(cm, 0.8 * (PI / 3.0).sin() / 0.84_f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(pm, 0.6, epsilon = 1e-12);

        let (ci, cm, pm) = qubit_closed_form(1.0, PI / 4.0).unwrap();
        assert_relative_eq!(ci, 0.5_f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(cm, 1.0, epsilon = 1e-12);
        assert_relative_eq!(pm, 1.0 - 0.5_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn qubit_closed_form_frozen_reference_values() {
        // Reference decimals computed independently at 30-digit precision.
        let (ci, cm, pm) = qubit_closed_form(0.8, PI / 3.0).unwrap();
        assert_relative_eq!(ci, 0.69282032302755092, epsilon = 1e-15);
        assert_relative_eq!(cm, 0.75592894601845445, epsilon = 1e-15);
        assert_relative_eq!(pm, 0.6, epsilon = 1e-15);

        let (ci, _, pm) = qubit_closed_form(1.0, PI / 4.0).unwrap();
        assert_relative_eq!(ci, 0.70710678118654752, epsilon = 1e-15);
        assert_relative_eq!(pm, 0.29289321881345248, epsilon = 1e-15);
    }

    #[test]
    fn one_dimensional_state_is_a_fixed_point() {
        let rho = diagonal_state(&[1.0], DEFAULT_TOL).unwrap();
        let result = analyze(&rho).unwrap();
        assert_eq!(result.c_input, 0.0);
        assert_eq!(result.c_max, 0.0);
        assert_relative_eq!(result.p_max, 1.0, epsilon = 1e-15);
        assert_eq!(result.kraus.entries()[(0, 0)], c(1.0, 0.0));
        assert_eq!(result.blocks.len(), 1);
    }

    #[test]
    fn qubit_parameters_out_of_range_are_rejected() {
        assert!(matches!(
            qubit_closed_form(0.8, 0.0),
            Err(EnhanceError::OutOfRange { name: "theta", .. })
        ));
        assert!(matches!(
            qubit_closed_form(0.0, 1.0),
            Err(EnhanceError::OutOfRange { name: "r", .. })
        ));
        assert!(matches!(
            qubit_closed_form(1.2, 1.0),
            Err(EnhanceError::OutOfRange { name: "r", .. })
        ));
        assert!(matches!(
            qubit_closed_form(0.5, PI),
            Err(EnhanceError::OutOfRange { name: "theta", .. })
        ));
    }
}
