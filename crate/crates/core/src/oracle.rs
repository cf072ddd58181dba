//! Independent verification oracles.
//!
//! Everything here is deliberately dumber than the solver it checks:
//! brute-force search over random diagonal Kraus operators bounds the
//! maximal coherence from below, seeded Monte Carlo instrument sampling
//! estimates the success probability empirically, and the all-ones checker
//! tests the comparison-matrix propagation property on random states.
//!
//! All randomness flows through ChaCha generators seeded either directly or
//! through [`split_seed`], so every report is replayable from the seeds it
//! carries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use thiserror::Error;

use crate::channel::{ChannelError, KrausOperator, KrausSet};
use crate::enhance::{analyze, EnhanceError};
use crate::state::{ComparisonMatrix, DensityMatrix, StateError, DEFAULT_TOL};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum OracleError {
    #[error("instrument is not complete: max |sum K'K - I| = {deviation:.3e}")]
    IncompleteInstrument { deviation: f64 },
    #[error(transparent)]
    Enhance(#[from] EnhanceError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// splitmix64 step: derives independent substream seeds from (seed, index).
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Ginibre-style random state: G is d x rank with independent standard
/// normal real and imaginary parts, and the state is G G' normalized by its
/// trace. rank = 1 gives pure states, rank = d full-rank mixed states.
/// Bit-identical output for a fixed seed.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> DensityMatrix {
    assert!(dim >= 1, "dimension must be positive");
    assert!(
        (1..=dim).contains(&rank),
        "rank must lie in 1..=dim, got {rank} for dim {dim}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(dim, rank, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gram = &g * g.adjoint();
    let trace: f64 = (0..dim).map(|i| gram[(i, i)].re).sum();
    DensityMatrix::new(gram.unscale(trace), DEFAULT_TOL)
        .expect("normalized Gram matrix is a valid state by construction")
}

/// Normalized random complex amplitude vector.
pub fn random_amplitudes(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|a| a / norm).collect()
}

/// Uniform random permutation of 0..dim.
pub fn random_permutation(dim: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Relabels basis indices: index i of the input becomes perm[i].
pub fn permute_state(rho: &DensityMatrix, perm: &[usize]) -> DensityMatrix {
    let d = rho.dim();
    assert_eq!(perm.len(), d);
    let mut entries = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            entries[(perm[i], perm[j])] = rho.entries()[(i, j)];
        }
    }
    DensityMatrix::new(entries, rho.tol()).expect("permutation preserves validity")
}

/// Random complete strictly incoherent instrument with `n_ops` operators:
/// each operator is a permutation times a diagonal, and the squared column
/// magnitudes are Dirichlet-distributed across operators so the set sums to
/// identity.
pub fn random_sio_instrument(
    dim: usize,
    n_ops: usize,
    rng: &mut ChaCha8Rng,
    tol: f64,
) -> KrausSet {
    assert!(n_ops >= 1);
    // column_weights[i][n]: squared modulus placed on column i by operator n.
    let column_weights: Vec<Vec<f64>> = (0..dim)
        .map(|_| {
            let draws: Vec<f64> = (0..n_ops).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = draws.iter().sum();
            draws.into_iter().map(|x| x / total).collect()
        })
        .collect();
    let operators: Vec<KrausOperator> = (0..n_ops)
        .map(|n| {
            let perm = random_permutation(dim, rng);
            let mut entries = DMatrix::zeros(dim, dim);
            for i in 0..dim {
                let phase = rng.random::<f64>() * std::f64::consts::TAU;
                let magnitude = column_weights[i][n].sqrt();
                entries[(perm[i], i)] =
                    Complex64::new(phase.cos(), phase.sin()) * magnitude;
            }
            KrausOperator::new(entries).expect("square by construction")
        })
        .collect();
    KrausSet::new(operators, tol).expect("column weights sum to one")
}

/// Best coherence found by sampling diagonal Kraus operators, plus the
/// deterministic candidates that make the eigenvalue answer reachable exactly.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub best_coherence: f64,
    pub best_diagonal: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
}

/// Empirical success statistics of a completed instrument.
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub trials: u64,
    pub successes: u64,
    pub empirical_p: f64,
    pub std_error: f64,
    pub seed: u64,
}

fn eq11_numerator_denominator(
    abs: &DMatrix<f64>,
    pops: &[f64],
    moduli: &[f64],
) -> (f64, f64) {
    let d = pops.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..d {
        den += moduli[i] * moduli[i] * pops[i];
        for j in (i + 1)..d {
            num += 2.0 * moduli[i] * moduli[j] * abs[(i, j)];
        }
    }
    (num, den)
}

/// Coherence of K rho K' / Tr(K rho K') for the diagonal Kraus operator
/// with the given entry moduli (only moduli matter). None when the branch
/// probability is at or below the state's tolerance.
pub fn diagonal_kraus_coherence(rho: &DensityMatrix, moduli: &[f64]) -> Option<f64> {
    assert_eq!(moduli.len(), rho.dim());
    let (num, den) = eq11_numerator_denominator(&rho.abs_matrix(), &rho.populations(), moduli);
    (den > rho.tol()).then(|| num / den)
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in &mut v {
            *x /= norm;
        }
    }
    v
}

/// Randomized lower-bound search for the maximal enhanced coherence:
/// squared moduli are sampled uniformly on the probability simplex, and the
/// uniform vector plus the solver's own optimal diagonal are always
/// included, so the report both never exceeds the eigenvalue answer and reaches
/// it exactly. Deterministic for a fixed seed.
pub fn brute_force_max_coherence(
    rho: &DensityMatrix,
    samples: u64,
    seed: u64,
) -> Result<SearchReport, EnhanceError> {
    assert!(samples >= 1, "at least one sample required");
    let d = rho.dim();
    let abs = rho.abs_matrix();
    let pops = rho.populations();
    let tol = rho.tol();

    let mut best = f64::NEG_INFINITY;
    let mut best_diagonal = vec![0.0; d];
    let consider = |moduli: &[f64], best: &mut f64, best_diagonal: &mut Vec<f64>| {
        let (num, den) = eq11_numerator_denominator(&abs, &pops, moduli);
        if den > tol {
            let value = num / den;
            if value > *best {
                *best = value;
                *best_diagonal = normalized(moduli.to_vec());
            }
        }
    };

    let uniform = vec![1.0 / (d as f64).sqrt(); d];
    consider(&uniform, &mut best, &mut best_diagonal);

    let optimal = analyze(rho)?;
    let solver_candidate: Vec<f64> = (0..d)
        .map(|i| optimal.kraus.entries()[(i, i)].norm())
        .collect();
    consider(&solver_candidate, &mut best, &mut best_diagonal);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moduli = vec![0.0_f64; d];
    for _ in 0..samples {
        let mut total = 0.0;
        for slot in moduli.iter_mut() {
            let x: f64 = rng.sample(Exp1);
            *slot = x;
            total += x;
        }
        for slot in moduli.iter_mut() {
            *slot = (*slot / total).sqrt();
        }
        consider(&moduli, &mut best, &mut best_diagonal);
    }

    Ok(SearchReport {
        best_coherence: best,
        best_diagonal,
        samples,
        seed,
    })
}

/// Samples measurement outcomes of a completed instrument and counts draws
/// landing in the original (pre-completion) subset, i.e. every operator but
/// the final failure branch appended by completion.
pub fn monte_carlo_success(
    rho: &DensityMatrix,
    ks: &KrausSet,
    trials: u64,
    seed: u64,
) -> Result<TrialReport, OracleError> {
    assert!(trials >= 1, "at least one trial required");
    let deviation = ks.completeness_deviation();
    if deviation > rho.tol() {
        return Err(OracleError::IncompleteInstrument { deviation });
    }
    let probabilities: Vec<f64> = ks
        .operators()
        .iter()
        .map(|op| {
            let m = op.entries() * rho.entries() * op.entries().adjoint();
            (0..rho.dim()).map(|i| m[(i, i)].re).sum::<f64>().max(0.0)
        })
        .collect();
    let total: f64 = probabilities.iter().sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut successes = 0u64;
    let last = ks.len() - 1;
    for _ in 0..trials {
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut drawn = last;
        for (n, &p) in probabilities.iter().enumerate() {
            acc += p;
            if target < acc {
                drawn = n;
                break;
            }
        }
        if drawn < last {
            successes += 1;
        }
    }

    let empirical_p = successes as f64 / trials as f64;
    let std_error = (empirical_p * (1.0 - empirical_p) / trials as f64).sqrt();
    Ok(TrialReport {
        trials,
        successes,
        empirical_p,
        std_error,
        seed,
    })
}

/// Checks the propagation property on a comparison matrix: either no row is
/// all ones (within tol), or every entry is. On matrices built from valid
/// states this must never be false.
pub fn all_ones_propagation_check(a: &ComparisonMatrix, tol: f64) -> bool {
    let d = a.dim();
    let m = a.entries();
    let all_ones_row = (0..d).any(|i| (0..d).all(|j| (m[(i, j)] - 1.0).abs() <= tol));
    if !all_ones_row {
        return true;
    }
    (0..d).all(|i| (0..d).all(|j| (m[(i, j)] - 1.0).abs() <= tol))
}
