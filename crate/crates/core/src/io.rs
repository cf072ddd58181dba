//! JSON wire formats.
//!
//! States: `{"dim": d, "entries": [[[re, im], ...], ...]}` with row-major
//! d x d arrays of two-element real pairs. Kraus sets: `{"dim": d,
//! "operators": [entries, ...]}`. Parsing is strict: missing keys,
//! unknown keys, non-square arrays, and non-finite numbers are rejected.
//!
//! All reals in emitted JSON carry 17 significant digits
//! (`d.dddddddddddddddde[-]x`), enough to round-trip every f64 exactly.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::channel::{ChannelError, KrausOperator, KrausSet};
use crate::enhance::{BlockReport, EnhancementResult};
use crate::oracle::{SearchReport, TrialReport};
use crate::state::{DensityMatrix, StateError};
use crate::verify::{CampaignSummary, PropertyReport};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dim must be a positive integer")]
    ZeroDim,
    #[error("dim is {dim} but the array has {rows} rows")]
    RowCountMismatch { dim: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("entry at ({i},{j}) is not finite")]
    NonFinite { i: usize, j: usize },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKrausSet {
    dim: usize,
    operators: Vec<Vec<Vec<[f64; 2]>>>,
}

fn matrix_from_rows(dim: usize, rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<Complex64>, IoError> {
    if dim == 0 {
        return Err(IoError::ZeroDim);
    }
    if rows.len() != dim {
        return Err(IoError::RowCountMismatch {
            dim,
            rows: rows.len(),
        });
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(IoError::NotSquare {
                row: i,
                len: row.len(),
                dim,
            });
        }
        for (j, pair) in row.iter().enumerate() {
            if !pair[0].is_finite() || !pair[1].is_finite() {
                return Err(IoError::NonFinite { i, j });
            }
        }
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Parses and validates a state file.
pub fn state_from_json(text: &str, tol: f64) -> Result<DensityMatrix, IoError> {
    let raw: RawState =
        serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    let entries = matrix_from_rows(raw.dim, &raw.entries)?;
    Ok(DensityMatrix::new(entries, tol)?)
}

/// Parses and validates a Kraus-set file (subnormalization checked).
pub fn kraus_set_from_json(text: &str, tol: f64) -> Result<KrausSet, IoError> {
    let raw: RawKrausSet =
        serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    let operators = raw
        .operators
        .iter()
        .map(|rows| Ok(KrausOperator::new(matrix_from_rows(raw.dim, rows)?)?))
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(KrausSet::new(operators, tol)?)
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any value to compact JSON with 17-significant-digit reals.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    String::from_utf8(out).expect("serializer emits valid UTF-8")
}

struct ComplexRows<'a>(&'a DMatrix<Complex64>);

impl Serialize for ComplexRows<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let d = self.0.nrows();
        let mut rows = serializer.serialize_seq(Some(d))?;
        for i in 0..d {
            let row: Vec<[f64; 2]> = (0..self.0.ncols())
                .map(|j| [self.0[(i, j)].re, self.0[(i, j)].im])
                .collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DensityMatrix", 2)?;
        s.serialize_field("dim", &self.dim())?;
        s.serialize_field("entries", &ComplexRows(self.entries()))?;
        s.end()
    }
}

impl Serialize for KrausOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("KrausOperator", 2)?;
        s.serialize_field("dim", &self.dim())?;
        s.serialize_field("entries", &ComplexRows(self.entries()))?;
        s.end()
    }
}

impl Serialize for KrausSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("KrausSet", 2)?;
        s.serialize_field("dim", &self.dim())?;
        let rows: Vec<ComplexRows> = self
            .operators()
            .iter()
            .map(|op| ComplexRows(op.entries()))
            .collect();
        s.serialize_field("operators", &rows)?;
        s.end()
    }
}

impl Serialize for BlockReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BlockReport", 5)?;
        s.serialize_field("indices", &self.indices)?;
        s.serialize_field("weight", &self.weight)?;
        s.serialize_field("lambda", &self.lambda)?;
        s.serialize_field("phi", &self.phi)?;
        s.serialize_field("blockPMax", &self.block_p_max)?;
        s.end()
    }
}

impl Serialize for EnhancementResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("EnhancementResult", 7)?;
        s.serialize_field("cInput", &self.c_input)?;
        s.serialize_field("cMax", &self.c_max)?;
        s.serialize_field("pMax", &self.p_max)?;
        s.serialize_field("blocks", &self.blocks)?;
        s.serialize_field("winningBlocks", &self.winning_blocks)?;
        s.serialize_field("kraus", &self.kraus)?;
        s.serialize_field("failure", &self.failure)?;
        s.end()
    }
}

impl Serialize for TrialReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TrialReport", 5)?;
        s.serialize_field("trials", &self.trials)?;
        s.serialize_field("successes", &self.successes)?;
        s.serialize_field("empiricalP", &self.empirical_p)?;
        s.serialize_field("stdError", &self.std_error)?;
        s.serialize_field("seed", &self.seed)?;
        s.end()
    }
}

impl Serialize for SearchReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SearchReport", 4)?;
        s.serialize_field("bestCoherence", &self.best_coherence)?;
        s.serialize_field("bestDiagonal", &self.best_diagonal)?;
        s.serialize_field("samples", &self.samples)?;
        s.serialize_field("seed", &self.seed)?;
        s.end()
    }
}

impl Serialize for PropertyReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PropertyReport", 6)?;
        s.serialize_field("name", &self.name)?;
        s.serialize_field("pass", &self.pass)?;
        s.serialize_field("cases", &self.cases)?;
        s.serialize_field("worstMargin", &self.worst_margin)?;
        s.serialize_field("worstSeed", &self.worst_seed)?;
        s.serialize_field("detail", &self.detail)?;
        s.end()
    }
}

impl Serialize for CampaignSummary {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CampaignSummary", 6)?;
        s.serialize_field("seed", &self.seed)?;
        s.serialize_field("tol", &self.tol)?;
        s.serialize_field("samples", &self.samples)?;
        s.serialize_field("trials", &self.trials)?;
        s.serialize_field("properties", &self.properties)?;
        s.serialize_field("pass", &self.pass)?;
        s.end()
    }
}
