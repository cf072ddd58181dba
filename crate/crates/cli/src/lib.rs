//! Command implementations for the `siocoh` binary.
//!
//! Exit codes: 0 success, 1 property failure (a verification campaign or
//! the qubit cross-check reported a violation), 2 input error (unreadable
//! file, malformed JSON, invalid state, parameter out of range),
//! 3 numerical failure (solver did not converge).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sio_coherence::io::{state_from_json, to_json, IoError};
use sio_coherence::{
    analyze, monte_carlo_success, qubit_closed_form, qubit_state, run_campaigns, CampaignConfig,
    CampaignSummary, ChannelError, DensityMatrix, EnhanceError, EnhancementResult, KrausSet,
    OracleError, TrialReport, DEFAULT_TOL,
};

#[derive(Parser, Debug)]
#[command(name = "siocoh", version)]
#[command(about = "Maximal coherence enhancement under stochastic strictly incoherent operations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full enhancement report for a state file: input and maximal
    /// coherence, success probability, per-block data, optimal operators.
    Analyze {
        /// State file: {"dim": d, "entries": [[[re, im], ...], ...]}
        #[arg(long)]
        input: PathBuf,
        /// Validation tolerance
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Emit the optimal Kraus operator and its completion as a Kraus-set
    /// file: {"dim": d, "operators": [entries, entries]}.
    Enhance {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Build the optimal instrument for a state and sample success/failure
    /// outcomes; reports the empirical probability against the prediction.
    Simulate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Run the four randomized verification campaigns; exits 1 if any
    /// property is violated.
    Verify {
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Evaluate the Bloch-parameterized qubit by the closed forms and by
    /// the general pipeline, flagging any disagreement above 1e-9.
    Qubit {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Numerical(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<IoError> for CliError {
    fn from(err: IoError) -> Self {
        CliError::Input(err.to_string())
    }
}

impl From<EnhanceError> for CliError {
    fn from(err: EnhanceError) -> Self {
        match err {
            EnhanceError::NoConvergence { .. } => CliError::Numerical(err.to_string()),
            _ => CliError::Input(err.to_string()),
        }
    }
}

impl From<ChannelError> for CliError {
    fn from(err: ChannelError) -> Self {
        match err {
            ChannelError::ZeroProbability { .. } => CliError::Numerical(err.to_string()),
            _ => CliError::Input(err.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(err: OracleError) -> Self {
        match err {
            OracleError::Enhance(inner) => inner.into(),
            OracleError::Channel(inner) => inner.into(),
            _ => CliError::Numerical(err.to_string()),
        }
    }
}

fn load_state(path: &Path, tol: f64) -> Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(state_from_json(&text, tol)?)
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn join_indices(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn join_reals(values: impl Iterator<Item = f64>) -> String {
    values.map(fmt17).collect::<Vec<_>>().join(";")
}

fn csv_quote(text: &str) -> String {
    format!("\"{}\"", text.replace('"', "\"\""))
}

fn analyze_csv(result: &EnhancementResult) -> String {
    let mut out = String::from(
        "block,indices,weight,lambda,block_p_max,phi,kraus_diag,failure_diag,winning,c_input,c_max,p_max\n",
    );
    for (b, block) in result.blocks.iter().enumerate() {
        let kraus_diag = join_reals(
            block
                .indices
                .iter()
                .map(|&i| result.kraus.entries()[(i, i)].norm()),
        );
        let failure_diag = join_reals(
            block
                .indices
                .iter()
                .map(|&i| result.failure.entries()[(i, i)].norm()),
        );
        let _ = writeln!(
            out,
            "{b},{},{},{},{},{},{},{},{},{},{},{}",
            join_indices(&block.indices),
            fmt17(block.weight),
            fmt17(block.lambda),
            fmt17(block.block_p_max),
            join_reals(block.phi.iter().copied()),
            kraus_diag,
            failure_diag,
            result.winning_blocks.contains(&b),
            fmt17(result.c_input),
            fmt17(result.c_max),
            fmt17(result.p_max),
        );
    }
    out
}

fn kraus_csv(ks: &KrausSet) -> String {
    let mut out = String::from("operator,row,col,re,im\n");
    for (n, op) in ks.operators().iter().enumerate() {
        for i in 0..op.dim() {
            for j in 0..op.dim() {
                let c = op.entries()[(i, j)];
                let _ = writeln!(out, "{n},{i},{j},{},{}", fmt17(c.re), fmt17(c.im));
            }
        }
    }
    out
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SimulateReport {
    trials: u64,
    successes: u64,
    empirical_p: f64,
    std_error: f64,
    seed: u64,
    p_max: f64,
    abs_deviation: f64,
}

impl SimulateReport {
    fn new(trial: &TrialReport, p_max: f64) -> Self {
        Self {
            trials: trial.trials,
            successes: trial.successes,
            empirical_p: trial.empirical_p,
            std_error: trial.std_error,
            seed: trial.seed,
            p_max,
            abs_deviation: (trial.empirical_p - p_max).abs(),
        }
    }

    fn csv(&self) -> String {
        format!(
            "trials,successes,empirical_p,std_error,seed,p_max,abs_deviation\n{},{},{},{},{},{},{}\n",
            self.trials,
            self.successes,
            fmt17(self.empirical_p),
            fmt17(self.std_error),
            self.seed,
            fmt17(self.p_max),
            fmt17(self.abs_deviation),
        )
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct QubitPaths {
    c_input: f64,
    c_max: f64,
    p_max: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct QubitReport {
    r: f64,
    theta: f64,
    closed_form: QubitPaths,
    pipeline: QubitPaths,
    max_deviation: f64,
    agreement: bool,
}

impl QubitReport {
    fn csv(&self) -> String {
        format!(
            "r,theta,c_input_closed,c_max_closed,p_max_closed,c_input_pipeline,c_max_pipeline,p_max_pipeline,max_deviation,agreement\n{},{},{},{},{},{},{},{},{},{}\n",
            fmt17(self.r),
            fmt17(self.theta),
            fmt17(self.closed_form.c_input),
            fmt17(self.closed_form.c_max),
            fmt17(self.closed_form.p_max),
            fmt17(self.pipeline.c_input),
            fmt17(self.pipeline.c_max),
            fmt17(self.pipeline.p_max),
            fmt17(self.max_deviation),
            self.agreement,
        )
    }
}

fn verify_csv(summary: &CampaignSummary) -> String {
    let mut out = String::from("property,pass,cases,worst_margin,worst_seed,detail\n");
    for p in &summary.properties {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.name,
            p.pass,
            p.cases,
            fmt17(p.worst_margin),
            p.worst_seed,
            csv_quote(&p.detail),
        );
    }
    out
}

/// Runs one command, returning the stdout payload and the exit code.
pub fn run(cli: Cli) -> Result<(String, i32), CliError> {
    match cli.command {
        Command::Analyze { input, tol, format } => {
            let rho = load_state(&input, tol)?;
            let result = analyze(&rho)?;
            let text = match format {
                OutputFormat::Json => to_json(&result) + "\n",
                OutputFormat::Csv => analyze_csv(&result),
            };
            Ok((text, 0))
        }
        Command::Enhance { input, tol, format } => {
            let rho = load_state(&input, tol)?;
            let result = analyze(&rho)?;
            let ks = KrausSet::new(vec![result.kraus, result.failure], tol)?;
            let text = match format {
                OutputFormat::Json => to_json(&ks) + "\n",
                OutputFormat::Csv => kraus_csv(&ks),
            };
            Ok((text, 0))
        }
        Command::Simulate {
            input,
            trials,
            seed,
            tol,
            format,
        } => {
            let rho = load_state(&input, tol)?;
            let result = analyze(&rho)?;
            let instrument = KrausSet::new(vec![result.kraus], tol)?.complete();
            let trial = monte_carlo_success(&rho, &instrument, trials, seed)?;
            let report = SimulateReport::new(&trial, result.p_max);
            let text = match format {
                OutputFormat::Json => to_json(&report) + "\n",
                OutputFormat::Csv => report.csv(),
            };
            Ok((text, 0))
        }
        Command::Verify {
            samples,
            trials,
            seed,
            tol,
            format,
        } => {
            let cfg = CampaignConfig {
                seed,
                tol,
                samples,
                trials,
            };
            let summary = run_campaigns(&cfg)?;
            let code = if summary.pass { 0 } else { 1 };
            let text = match format {
                OutputFormat::Json => to_json(&summary) + "\n",
                OutputFormat::Csv => verify_csv(&summary),
            };
            Ok((text, code))
        }
        Command::Qubit {
            r,
            theta,
            tol,
            format,
        } => {
            let (c_input, c_max, p_max) = qubit_closed_form(r, theta)?;
            let rho = qubit_state(r, theta, 0.0, tol)?;
            let result = analyze(&rho)?;
            let max_deviation = (result.c_input - c_input)
                .abs()
                .max((result.c_max - c_max).abs())
                .max((result.p_max - p_max).abs());
            let report = QubitReport {
                r,
                theta,
                closed_form: QubitPaths {
                    c_input,
                    c_max,
                    p_max,
                },
                pipeline: QubitPaths {
                    c_input: result.c_input,
                    c_max: result.c_max,
                    p_max: result.p_max,
                },
                max_deviation,
                agreement: max_deviation <= 1e-9,
            };
            let code = if report.agreement { 0 } else { 1 };
            let text = match format {
                OutputFormat::Json => to_json(&report) + "\n",
                OutputFormat::Csv => report.csv(),
            };
            Ok((text, code))
        }
    }
}
