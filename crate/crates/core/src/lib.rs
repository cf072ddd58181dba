//! Coherence enhancement of finite-dimensional quantum states under
//! stochastic strictly incoherent operations.
//!
//! The library computes, for a validated density matrix, the maximal
//! l1-coherence reachable by post-selecting on a strictly incoherent Kraus
//! operator, the maximal probability of reaching it, and the explicit
//! optimal operator itself. Randomized oracles (brute-force diagonal-Kraus
//! search, seeded Monte Carlo instrument sampling) verify the closed-form
//! answers independently.
//!
//! Modules:
//! - [`state`]: density-matrix validation, l1 coherence, comparison matrix
//! - [`channel`]: strictly incoherent Kraus operators and (sub)channels
//! - [`enhance`]: block decomposition, Perron solver, optimal enhancement
//! - [`oracle`]: randomized verification oracles and state generators
//! - [`verify`]: bundled property campaigns with replayable seeds
//! - [`io`]: JSON wire formats for states, Kraus sets, and reports

pub mod channel;
pub mod enhance;
pub mod io;
pub mod oracle;
pub mod state;
pub mod verify;

pub use channel::{
    apply_selective, apply_stochastic, ChannelError, KrausOperator, KrausSet, SelectiveOutcome,
};
pub use enhance::{
    analyze, block_decompose, max_enhanced_coherence, max_probability, optimal_kraus, perron,
    pure_state_analysis, qubit_closed_form, qubit_state, BlockDecomposition, BlockReport,
    EnhanceError, EnhancementResult, PerronData, StateBlock, LAMBDA_TIE_TOL, PERRON_CONV_TOL,
    PERRON_MAX_ITER,
};
pub use oracle::{
    all_ones_propagation_check, brute_force_max_coherence, diagonal_kraus_coherence,
    monte_carlo_success, permute_state, random_amplitudes, random_density, random_permutation,
    random_sio_instrument, split_seed, OracleError, SearchReport, TrialReport,
};
pub use state::{
    diagonal_state, max_abs_diff, ComparisonMatrix, DensityMatrix, StateError, DEFAULT_TOL,
};
pub use verify::{run_campaigns, CampaignConfig, CampaignSummary, PropertyReport};
