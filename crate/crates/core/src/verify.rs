//! Bundled verification campaigns.
//!
//! Four self-contained property suites driven entirely by a master seed:
//! the brute-force oracle ceiling, Monte Carlo probability concordance, the
//! all-ones propagation property, and the pure/mixed dichotomy. Per-state
//! seeds derive from the master seed through [`split_seed`], so a failing
//! case can be replayed in isolation.

use crate::channel::KrausSet;
use crate::enhance::analyze;
use crate::oracle::{
    all_ones_propagation_check, brute_force_max_coherence, monte_carlo_success, random_density,
    split_seed, OracleError,
};

/// Campaign sizing. State counts are fixed by the suite definitions;
/// `samples` and `trials` scale the per-state work.
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub seed: u64,
    pub tol: f64,
    pub samples: u64,
    pub trials: u64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            tol: crate::state::DEFAULT_TOL,
            samples: 100_000,
            trials: 100_000,
        }
    }
}

/// One property suite outcome. `worst_margin` is signed slack: values at or
/// below zero pass, positive values measure the worst violation.
/// `worst_seed` replays the binding case through [`random_density`].
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    pub pass: bool,
    pub cases: u64,
    pub worst_margin: f64,
    pub worst_seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CampaignSummary {
    pub seed: u64,
    pub tol: f64,
    pub samples: u64,
    pub trials: u64,
    pub properties: Vec<PropertyReport>,
    pub pass: bool,
}

const TAG_ORACLE: u64 = 1;
const TAG_MONTE_CARLO: u64 = 2;
const TAG_APPENDIX: u64 = 3;
const TAG_DICHOTOMY: u64 = 4;

pub fn run_campaigns(cfg: &CampaignConfig) -> Result<CampaignSummary, OracleError> {
    let properties = vec![
        oracle_ceiling(cfg)?,
        monte_carlo_concordance(cfg)?,
        appendix_propagation(cfg),
        pure_mixed_dichotomy(cfg)?,
    ];
    let pass = properties.iter().all(|p| p.pass);
    Ok(CampaignSummary {
        seed: cfg.seed,
        tol: cfg.tol,
        samples: cfg.samples,
        trials: cfg.trials,
        properties,
        pass,
    })
}

/// Brute-force search must never beat the eigenvalue answer and must reach
/// it exactly through the injected optimal candidate. 200 states of mixed
/// rank, dimensions 2..=5.
fn oracle_ceiling(cfg: &CampaignConfig) -> Result<PropertyReport, OracleError> {
    let base = split_seed(cfg.seed, TAG_ORACLE);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_seed = base;
    let cases = 200u64;
    for i in 0..cases {
        let dim = 2 + (i as usize % 4);
        let rank = 1 + ((i as usize / 4) % dim);
        let state_seed = split_seed(base, i);
        let rho = random_density(dim, rank, state_seed);
        let c_max = analyze(&rho)?.c_max;
        let report = brute_force_max_coherence(&rho, cfg.samples, split_seed(state_seed, 1))?;
        let excess = report.best_coherence - (c_max + 1e-9);
        let shortfall = (c_max - 1e-9) - report.best_coherence;
        let margin = excess.max(shortfall);
        if margin > worst {
            worst = margin;
            worst_seed = state_seed;
        }
    }
    Ok(PropertyReport {
        name: "oracle_ceiling",
        pass: worst <= 0.0,
        cases,
        worst_margin: worst,
        worst_seed,
        detail: format!(
            "best sampled coherence within 1e-9 of the eigenvalue answer on every state \
             ({} diagonal samples per state)",
            cfg.samples
        ),
    })
}

/// Empirical success frequency of the optimal instrument stays within four
/// standard errors of the predicted probability on 50 random states.
fn monte_carlo_concordance(cfg: &CampaignConfig) -> Result<PropertyReport, OracleError> {
    let base = split_seed(cfg.seed, TAG_MONTE_CARLO);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_seed = base;
    let cases = 50u64;
    for i in 0..cases {
        let dim = 2 + (i as usize % 4);
        let rank = 1 + ((i as usize / 4) % dim);
        let state_seed = split_seed(base, i);
        let rho = random_density(dim, rank, state_seed);
        let result = analyze(&rho)?;
        let instrument =
            KrausSet::new(vec![result.kraus.clone()], cfg.tol)?.complete();
        let trial =
            monte_carlo_success(&rho, &instrument, cfg.trials, split_seed(state_seed, 1))?;
        let margin = (trial.empirical_p - result.p_max).abs() - 4.0 * trial.std_error;
        if margin > worst {
            worst = margin;
            worst_seed = state_seed;
        }
    }
    Ok(PropertyReport {
        name: "monte_carlo_concordance",
        pass: worst <= 0.0,
        cases,
        worst_margin: worst,
        worst_seed,
        detail: format!(
            "|empirical - predicted| <= 4 standard errors at {} trials per state",
            cfg.trials
        ),
    })
}

/// The all-ones propagation check holds on 10^4 random states per
/// dimension 2..=6.
fn appendix_propagation(cfg: &CampaignConfig) -> PropertyReport {
    let base = split_seed(cfg.seed, TAG_APPENDIX);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_seed = base;
    let mut cases = 0u64;
    for dim in 2..=6usize {
        for i in 0..10_000u64 {
            let state_seed = split_seed(base, (dim as u64) << 32 | i);
            let rank = 1 + (i as usize % dim);
            let rho = random_density(dim, rank, state_seed);
            let ok = all_ones_propagation_check(&rho.comparison_matrix(), cfg.tol);
            let margin = if ok { -1.0 } else { 1.0 };
            if margin > worst {
                worst = margin;
                worst_seed = state_seed;
            }
            cases += 1;
        }
    }
    PropertyReport {
        name: "all_ones_propagation",
        pass: worst <= 0.0,
        cases,
        worst_margin: worst,
        worst_seed,
        detail: "a row of ones in the comparison matrix forces every entry to one \
                 (margin is -1 when the implication held for every state)"
            .to_string(),
    }
}

/// Full-support pure states reach coherence d-1 (within 1e-9); states of
/// rank two or more stay strictly below it.
fn pure_mixed_dichotomy(cfg: &CampaignConfig) -> Result<PropertyReport, OracleError> {
    let base = split_seed(cfg.seed, TAG_DICHOTOMY);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_seed = base;
    let mut cases = 0u64;
    for dim in 2..=6usize {
        for i in 0..100u64 {
            // Pure branch: resample until the state has full support, so the
            // nonzero-component count is d.
            let mut state_seed = split_seed(base, (dim as u64) << 32 | i);
            let mut rho = random_density(dim, 1, state_seed);
            while rho.support().iter().any(|&s| !s) {
                state_seed = split_seed(state_seed, 0xF);
                rho = random_density(dim, 1, state_seed);
            }
            let c_max = analyze(&rho)?.c_max;
            let margin = (c_max - (dim as f64 - 1.0)).abs() - 1e-9;
            if margin > worst {
                worst = margin;
                worst_seed = state_seed;
            }
            cases += 1;

            // Mixed branch: rank >= 2 must stay strictly below d-1.
            let rank = 2 + (i as usize % (dim - 1));
            let state_seed = split_seed(base, (dim as u64) << 40 | i);
            let rho = random_density(dim, rank, state_seed);
            let c_max = analyze(&rho)?.c_max;
            let margin = c_max - (dim as f64 - 1.0) + 1e-9;
            if margin > worst {
                worst = margin;
                worst_seed = state_seed;
            }
            cases += 1;
        }
    }
    Ok(PropertyReport {
        name: "pure_mixed_dichotomy",
        pass: worst <= 0.0,
        cases,
        worst_margin: worst,
        worst_seed,
        detail: "full-support pure states reach d-1 within 1e-9; mixed states stay below"
            .to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_campaign_run_passes_and_is_deterministic() {
        let cfg = CampaignConfig {
            seed: 7,
            samples: 50,
            trials: 500,
            ..CampaignConfig::default()
        };
        let first = run_campaigns(&cfg).unwrap();
        assert!(first.pass, "campaigns failed: {:?}", first.properties);
        assert_eq!(first.properties.len(), 4);

        let second = run_campaigns(&cfg).unwrap();
        for (a, b) in first.properties.iter().zip(second.properties.iter()) {
            assert_eq!(a.worst_margin.to_bits(), b.worst_margin.to_bits());
            assert_eq!(a.worst_seed, b.worst_seed);
        }
    }
}
