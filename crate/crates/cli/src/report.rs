//! JSON report written by `--json`. Field order is fixed by the structs, so
//! the same command and seed always serialize to the same bytes.

use std::path::Path;

use ghz_teleport_core::protocol::PlannedOp;
use ghz_teleport_core::{CMatrix, Gate, StateVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fail::Failure;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub parameters: Parameters,
    /// `None` when the outcome was forced.
    pub seed: Option<u64>,
    pub rows: Vec<OutcomeRow>,
    pub aggregate: Aggregate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisSummary>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<[f64; 2]>,
    pub phi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_outcome: Option<usize>,
}

/// One gate a receiver applies. `matrix` (row-major `[re, im]` pairs) is
/// present only for gates without a name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateEntry {
    pub party: String,
    pub qubits: Vec<usize>,
    pub gate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRow {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// For state-dependent outcomes, the average over uniformly random inputs.
    pub probability: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub state_dependent: bool,
    /// `None` when no input-independent correction exists.
    pub corrections: Option<Vec<GateEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub outcomes: usize,
    pub probability_sum: f64,
    pub max_probability_deviation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_fidelity: Option<f64>,
}

impl Aggregate {
    pub fn of(rows: &[OutcomeRow]) -> Self {
        let uniform = 1.0 / rows.len() as f64;
        let fidelities: Vec<f64> = rows.iter().filter_map(|r| r.fidelity).collect();
        Self {
            outcomes: rows.len(),
            probability_sum: rows.iter().map(|r| r.probability).sum(),
            max_probability_deviation: rows
                .iter()
                .map(|r| (r.probability - uniform).abs())
                .fold(0.0, f64::max),
            min_fidelity: (!fidelities.is_empty())
                .then(|| fidelities.iter().copied().fold(f64::INFINITY, f64::min)),
        }
    }
}

/// The sampled (or forced) run itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub k: usize,
    pub probability: f64,
    pub operations: Vec<GateEntry>,
    pub messages: usize,
    pub fidelity: f64,
    /// Receivers' final amplitudes as `[re, im]` pairs.
    pub final_state: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisSummary {
    pub tag: String,
    pub vectors: usize,
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<String>>,
    pub entangled_pair_count: usize,
    pub gram_deviation: f64,
    pub verdict: String,
    pub zero_outcomes: Vec<usize>,
    pub state_dependent_outcomes: Vec<usize>,
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn amplitudes(state: &StateVector) -> Vec<[f64; 2]> {
    state.amps().iter().copied().map(pair).collect()
}

fn matrix_entries(m: &CMatrix) -> Vec<[f64; 2]> {
    m.as_slice().iter().copied().map(pair).collect()
}

pub fn gate_entry(party: String, qubits: Vec<usize>, gate: &Gate) -> GateEntry {
    let named = Gate::by_name(gate.label()).is_some();
    GateEntry {
        party,
        qubits,
        gate: gate.label().to_string(),
        matrix: (!named).then(|| matrix_entries(gate.matrix())),
    }
}

pub fn plan_entries(plan: &[PlannedOp]) -> Vec<GateEntry> {
    plan.iter()
        .map(|op| gate_entry(op.party.to_string(), vec![op.qubit], &op.gate))
        .collect()
}

pub fn write_json(report: &RunReport, path: &Path) -> Result<(), Failure> {
    let mut text =
        serde_json::to_string_pretty(report).map_err(|e| Failure::Physics(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Failure::io(path, e))
}
