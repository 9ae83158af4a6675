//! Gate networks with mid-circuit computational-basis measurement and
//! classically controlled gates, plus the EPR teleportation network.
//!
//! Text format, one op per line (`#` starts a comment, the header comment
//! `# qubits N bits M` fixes the register sizes):
//!
//! ```text
//! U <gate> <targets>
//! MZ <qubit> <bit>
//! CC <gate> <targets> if <pattern>
//! QC <gate> <targets> ctrl <qubits> if <pattern>
//! ```
//!
//! Qubits are 1-based, classical bits 0-based. A pattern has one character
//! per classical bit (`CC`) or per control qubit (`QC`): `0`, `1`, or `-`
//! for "any".

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

// Only needed without std; with std linked the inherent f64 methods win.
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::measure::{Outcome, OutcomeSelector};
use crate::protocol::{correction_plan, teleport_epr, RuleVariant, UnknownCoeffs};
use crate::state::{check_qubits, StateVector};
use crate::transcript::ProtocolKind;
use crate::TOLERANCE;

/// Per-position requirement on a bit: `Some(value)` or don't-care.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitPattern(Vec<Option<bool>>);

impl BitPattern {
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '-' => Ok(None),
                other => Err(Error::InvalidCircuit(format!(
                    "bad pattern character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Exact pattern for `value` over `width` bits, most significant first.
    pub fn from_value(value: usize, width: usize) -> Self {
        Self(
            (0..width)
                .map(|i| Some((value >> (width - 1 - i)) & 1 == 1))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matches(&self, bits: &[bool]) -> bool {
        self.0
            .iter()
            .zip(bits)
            .all(|(want, have)| want.is_none_or(|w| w == *have))
    }

    fn required(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, b)| b.is_some())
            .map(|(i, _)| i)
    }
}

impl core::fmt::Display for BitPattern {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for b in &self.0 {
            f.write_char(match b {
                Some(true) => '1',
                Some(false) => '0',
                None => '-',
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CircuitOp {
    Unitary {
        gate: Gate,
        targets: Vec<usize>,
    },
    MeasureZ {
        qubit: usize,
        bit: usize,
    },
    /// Applied when the classical bits match `condition`.
    ClassicallyControlled {
        gate: Gate,
        targets: Vec<usize>,
        condition: BitPattern,
    },
    /// Applied on the branch where the control qubits match `pattern`.
    QuantumControlled {
        gate: Gate,
        targets: Vec<usize>,
        controls: Vec<usize>,
        pattern: BitPattern,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_bits: usize,
    ops: Vec<CircuitOp>,
}

impl Circuit {
    /// Validates qubit ranges, gate arities, that every classical bit is
    /// written before it is read and that measured qubits are left alone.
    pub fn new(n_qubits: usize, n_bits: usize, ops: Vec<CircuitOp>) -> Result<Self> {
        crate::state::check_register(n_qubits)?;
        let mut written = vec![false; n_bits];
        let mut measured = vec![false; n_qubits + 1];
        let touch = |qs: &[usize], measured: &[bool]| -> Result<()> {
            check_qubits(n_qubits, qs)?;
            if let Some(q) = qs.iter().find(|&&q| measured[q]) {
                return Err(Error::InvalidCircuit(format!(
                    "qubit {q} is used after measurement"
                )));
            }
            Ok(())
        };
        let arity = |gate: &Gate, targets: &[usize]| -> Result<()> {
            if gate.arity() != targets.len() {
                return Err(Error::ArityMismatch {
                    expected: gate.arity(),
                    found: targets.len(),
                });
            }
            Ok(())
        };
        for op in &ops {
            match op {
                CircuitOp::Unitary { gate, targets } => {
                    arity(gate, targets)?;
                    touch(targets, &measured)?;
                }
                CircuitOp::MeasureZ { qubit, bit } => {
                    touch(&[*qubit], &measured)?;
                    if *bit >= n_bits {
                        return Err(Error::InvalidCircuit(format!(
                            "classical bit {bit} out of range for {n_bits} bits"
                        )));
                    }
                    measured[*qubit] = true;
                    written[*bit] = true;
                }
                CircuitOp::ClassicallyControlled {
                    gate,
                    targets,
                    condition,
                } => {
                    arity(gate, targets)?;
                    touch(targets, &measured)?;
                    if condition.len() != n_bits {
                        return Err(Error::InvalidCircuit(format!(
                            "pattern {condition} does not cover {n_bits} bits"
                        )));
                    }
                    if let Some(bit) = condition.required().find(|&b| !written[b]) {
                        return Err(Error::UnwrittenClassicalBit { bit });
                    }
                }
                CircuitOp::QuantumControlled {
                    gate,
                    targets,
                    controls,
                    pattern,
                } => {
                    arity(gate, targets)?;
                    let all: Vec<usize> = targets.iter().chain(controls).copied().collect();
                    touch(&all, &measured)?;
                    if pattern.len() != controls.len() {
                        return Err(Error::InvalidCircuit(format!(
                            "pattern {pattern} does not cover {} controls",
                            controls.len()
                        )));
                    }
                }
            }
        }
        Ok(Self {
            n_qubits,
            n_bits,
            ops,
        })
    }

    pub fn empty(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 0, Vec::new())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    /// `(qubit, bit)` of every measurement, in circuit order.
    pub fn measurements(&self) -> Vec<(usize, usize)> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                CircuitOp::MeasureZ { qubit, bit } => Some((*qubit, *bit)),
                _ => None,
            })
            .collect()
    }

    /// Appends `fragment` with its qubit `j` placed on `j + offset`.
    pub fn then(&self, fragment: &Circuit, offset: usize) -> Result<Self> {
        let shift = |qs: &[usize]| qs.iter().map(|q| q + offset).collect::<Vec<_>>();
        let mut ops = self.ops.clone();
        for op in &fragment.ops {
            ops.push(match op {
                CircuitOp::Unitary { gate, targets } => CircuitOp::Unitary {
                    gate: gate.clone(),
                    targets: shift(targets),
                },
                CircuitOp::MeasureZ { qubit, bit } => CircuitOp::MeasureZ {
                    qubit: qubit + offset,
                    bit: *bit,
                },
                CircuitOp::ClassicallyControlled {
                    gate,
                    targets,
                    condition,
                } => CircuitOp::ClassicallyControlled {
                    gate: gate.clone(),
                    targets: shift(targets),
                    condition: condition.clone(),
                },
                CircuitOp::QuantumControlled {
                    gate,
                    targets,
                    controls,
                    pattern,
                } => CircuitOp::QuantumControlled {
                    gate: gate.clone(),
                    targets: shift(targets),
                    controls: shift(controls),
                    pattern: pattern.clone(),
                },
            });
        }
        Self::new(self.n_qubits, self.n_bits.max(fragment.n_bits), ops)
    }

    /// Deferred-measurement form: measurements are dropped and every
    /// classically controlled gate becomes controlled by the qubits that
    /// wrote its bits.
    pub fn deferred(&self) -> Result<Self> {
        let mut source = vec![None; self.n_bits];
        let mut ops = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            match op {
                CircuitOp::MeasureZ { qubit, bit } => source[*bit] = Some(*qubit),
                CircuitOp::ClassicallyControlled {
                    gate,
                    targets,
                    condition,
                } => {
                    let mut controls = Vec::new();
                    let mut pattern = Vec::new();
                    for bit in condition.required() {
                        let qubit = source[bit].ok_or(Error::UnwrittenClassicalBit { bit })?;
                        controls.push(qubit);
                        pattern.push(condition.0[bit]);
                    }
                    ops.push(CircuitOp::QuantumControlled {
                        gate: gate.clone(),
                        targets: targets.clone(),
                        controls,
                        pattern: BitPattern(pattern),
                    });
                }
                other => ops.push(other.clone()),
            }
        }
        Self::new(self.n_qubits, 0, ops)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# qubits {} bits {}\n", self.n_qubits, self.n_bits);
        let join = |qs: &[usize]| {
            qs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        for op in &self.ops {
            let line = match op {
                CircuitOp::Unitary { gate, targets } => {
                    format!("U {} {}", gate.label(), join(targets))
                }
                CircuitOp::MeasureZ { qubit, bit } => format!("MZ {qubit} {bit}"),
                CircuitOp::ClassicallyControlled {
                    gate,
                    targets,
                    condition,
                } => format!("CC {} {} if {condition}", gate.label(), join(targets)),
                CircuitOp::QuantumControlled {
                    gate,
                    targets,
                    controls,
                    pattern,
                } => format!(
                    "QC {} {} ctrl {} if {pattern}",
                    gate.label(),
                    join(targets),
                    join(controls)
                ),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Inverse of [`Circuit::to_text`]. Gates are looked up by name.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sizes = None;
        let mut ops = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                let words: Vec<&str> = comment.split_whitespace().collect();
                if let ["qubits", q, "bits", b] = words.as_slice() {
                    let q = q
                        .parse()
                        .map_err(|_| err(format!("bad qubit count {q:?}")))?;
                    let b = b.parse().map_err(|_| err(format!("bad bit count {b:?}")))?;
                    sizes = Some((q, b));
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let gate = |name: &str| {
                Gate::by_name(name).ok_or_else(|| err(format!("unknown gate {name:?}")))
            };
            let numbers = |ws: &[&str]| -> Result<Vec<usize>> {
                ws.iter()
                    .map(|w| {
                        w.parse()
                            .map_err(|_| err(format!("expected a number, got {w:?}")))
                    })
                    .collect()
            };
            let op = match words.as_slice() {
                ["U", g, rest @ ..] if !rest.is_empty() => CircuitOp::Unitary {
                    gate: gate(g)?,
                    targets: numbers(rest)?,
                },
                ["MZ", q, b] => CircuitOp::MeasureZ {
                    qubit: numbers(&[q])?[0],
                    bit: numbers(&[b])?[0],
                },
                ["CC", g, rest @ ..] => {
                    let split = rest
                        .iter()
                        .position(|w| *w == "if")
                        .ok_or_else(|| err(String::from("CC needs `if <pattern>`")))?;
                    let [pattern] = &rest[split + 1..] else {
                        return Err(err(String::from("CC needs exactly one pattern")));
                    };
                    CircuitOp::ClassicallyControlled {
                        gate: gate(g)?,
                        targets: numbers(&rest[..split])?,
                        condition: BitPattern::parse(pattern).map_err(|e| err(e.to_string()))?,
                    }
                }
                ["QC", g, rest @ ..] => {
                    let ctrl = rest
                        .iter()
                        .position(|w| *w == "ctrl")
                        .ok_or_else(|| err(String::from("QC needs `ctrl <qubits>`")))?;
                    let cond = rest
                        .iter()
                        .position(|w| *w == "if")
                        .filter(|&c| c > ctrl)
                        .ok_or_else(|| err(String::from("QC needs `if <pattern>`")))?;
                    let [pattern] = &rest[cond + 1..] else {
                        return Err(err(String::from("QC needs exactly one pattern")));
                    };
                    CircuitOp::QuantumControlled {
                        gate: gate(g)?,
                        targets: numbers(&rest[..ctrl])?,
                        controls: numbers(&rest[ctrl + 1..cond])?,
                        pattern: BitPattern::parse(pattern).map_err(|e| err(e.to_string()))?,
                    }
                }
                _ => return Err(err(format!("unrecognized op {line:?}"))),
            };
            ops.push(op);
        }
        let (n_qubits, n_bits) = sizes.ok_or(Error::Parse {
            line: 1,
            message: String::from("missing `# qubits N bits M` header"),
        })?;
        Self::new(n_qubits, n_bits, ops)
    }
}

/// How mid-circuit measurements pick their results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchSelector {
    /// Each measurement samples from a `ChaCha8Rng` with this seed.
    Seeded(u64),
    /// All classical bits at once, bit 0 most significant.
    Forced(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitRun {
    /// Full register; measured qubits are left in their observed state.
    pub state: StateVector,
    pub bits: Vec<bool>,
    /// Probability of the observed branch.
    pub probability: f64,
}

impl CircuitRun {
    /// Bits read as a number, bit 0 most significant.
    pub fn branch(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }
}

fn bit_of(index: usize, n_qubits: usize, qubit: usize) -> bool {
    (index >> (n_qubits - qubit)) & 1 == 1
}

fn measure_z<R: Rng + ?Sized>(
    amps: &mut [Complex64],
    n_qubits: usize,
    qubit: usize,
    forced: Option<bool>,
    rng: &mut R,
) -> Result<(bool, f64)> {
    let p1: f64 = amps
        .iter()
        .enumerate()
        .filter(|(i, _)| bit_of(*i, n_qubits, qubit))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    let value = match forced {
        Some(v) => v,
        None => rng.random::<f64>() < p1,
    };
    let p = if value { p1 } else { 1.0 - p1 };
    if p <= TOLERANCE * TOLERANCE {
        return Err(Error::ZeroProbabilityOutcome { k: value as usize });
    }
    let scale = 1.0 / p.sqrt();
    for (i, a) in amps.iter_mut().enumerate() {
        if bit_of(i, n_qubits, qubit) == value {
            *a *= scale;
        } else {
            *a = Complex64::new(0.0, 0.0);
        }
    }
    Ok((value, p))
}

/// Applies `gate` to `targets` on the subspace where `controls` match.
fn apply_controlled(
    state: &StateVector,
    gate: &Gate,
    targets: &[usize],
    controls: &[usize],
    pattern: &BitPattern,
) -> Result<StateVector> {
    let n = state.n_qubits();
    let full = state.apply_gate(gate, targets)?;
    let amps = state
        .amps()
        .iter()
        .zip(full.amps())
        .enumerate()
        .map(|(i, (old, new))| {
            let bits: Vec<bool> = controls.iter().map(|&c| bit_of(i, n, c)).collect();
            if pattern.matches(&bits) {
                *new
            } else {
                *old
            }
        })
        .collect();
    StateVector::new(n, amps)
}

/// Runs `circuit` on `initial`.
pub fn run_circuit(
    circuit: &Circuit,
    initial: &StateVector,
    selector: BranchSelector,
) -> Result<CircuitRun> {
    if initial.n_qubits() != circuit.n_qubits {
        return Err(Error::WrongQubitCount {
            expected: circuit.n_qubits,
            found: initial.n_qubits(),
        });
    }
    let n_bits = circuit.n_bits;
    if let BranchSelector::Forced(b) = selector {
        if n_bits < usize::BITS as usize && b >> n_bits != 0 {
            return Err(Error::OutcomeOutOfRange {
                k: b,
                count: 1 << n_bits,
            });
        }
    }
    let mut rng = OutcomeSelector::rng(match selector {
        BranchSelector::Seeded(s) => s,
        BranchSelector::Forced(_) => 0,
    });
    let mut state = initial.clone();
    let mut bits = vec![false; n_bits];
    let mut probability = 1.0;
    for op in &circuit.ops {
        state = match op {
            CircuitOp::Unitary { gate, targets } => state.apply_gate(gate, targets)?,
            CircuitOp::MeasureZ { qubit, bit } => {
                let forced = match selector {
                    BranchSelector::Forced(b) => Some((b >> (n_bits - 1 - bit)) & 1 == 1),
                    BranchSelector::Seeded(_) => None,
                };
                let mut amps = state.into_amps();
                let (value, p) = measure_z(&mut amps, circuit.n_qubits, *qubit, forced, &mut rng)?;
                bits[*bit] = value;
                probability *= p;
                StateVector::new(circuit.n_qubits, amps)?
            }
            CircuitOp::ClassicallyControlled {
                gate,
                targets,
                condition,
            } => {
                if condition.matches(&bits) {
                    state.apply_gate(gate, targets)?
                } else {
                    state
                }
            }
            CircuitOp::QuantumControlled {
                gate,
                targets,
                controls,
                pattern,
            } => apply_controlled(&state, gate, targets, controls, pattern)?,
        };
    }
    Ok(CircuitRun {
        state,
        bits,
        probability,
    })
}

/// `CNOT(1 -> 2)`: turns `(alpha|0> + beta|1>)|1>` into
/// `alpha|01> + beta|10>`.
pub fn epr_prep_circuit() -> Circuit {
    Circuit::new(
        2,
        0,
        vec![CircuitOp::Unitary {
            gate: Gate::cnot(),
            targets: vec![1, 2],
        }],
    )
    .expect("valid fragment")
}

/// `(alpha|0> + beta|1>) (x) |1>`, the input of [`epr_prep_circuit`].
pub fn epr_prep_input(coeffs: &UnknownCoeffs) -> StateVector {
    let zero = Complex64::new(0.0, 0.0);
    StateVector::new(2, vec![zero, coeffs.alpha(), zero, coeffs.beta()])
        .expect("normalized coefficients")
}

/// `H 1, CNOT 1 2, CNOT 1 3`: `|000>` to the GHZ triplet.
pub fn ghz_prep_circuit() -> Circuit {
    Circuit::new(
        3,
        0,
        vec![
            CircuitOp::Unitary {
                gate: Gate::h(),
                targets: vec![1],
            },
            CircuitOp::Unitary {
                gate: Gate::cnot(),
                targets: vec![1, 2],
            },
            CircuitOp::Unitary {
                gate: Gate::cnot(),
                targets: vec![1, 3],
            },
        ],
    )
    .expect("valid fragment")
}

/// `CNOT 2 3, H 2, H 1`: sends each `phi = 0` element of the `pi1(23)`
/// basis to a computational state.
pub fn basis_change_circuit() -> Circuit {
    let u = |gate: Gate, targets: &[usize]| CircuitOp::Unitary {
        gate,
        targets: targets.to_vec(),
    };
    Circuit::new(
        3,
        0,
        vec![
            u(Gate::cnot(), &[2, 3]),
            u(Gate::h(), &[2]),
            u(Gate::h(), &[1]),
        ],
    )
    .expect("valid fragment")
}

/// The three measured bits `b1 b2 b3` as `4 b1 + 2 b2 + b3`, mapped to the
/// protocol outcome: `b1` is the `pi` sign, `b2` the Bell sign, `b3`
/// selects Psi over Phi.
pub fn branch_to_outcome(branch: usize) -> Outcome {
    let (b1, b2, b3) = ((branch >> 2) & 1, (branch >> 1) & 1, branch & 1);
    Outcome::from_index(b3 * 4 + b1 * 2 + b2)
}

pub fn outcome_to_branch(outcome: Outcome) -> usize {
    let i = outcome.index();
    let (b3, b1, b2) = ((i >> 2) & 1, (i >> 1) & 1, i & 1);
    (b1 << 2) | (b2 << 1) | b3
}

/// X/Z sequence (in application order) equal to `gate` up to phase.
fn pauli_sequence(gate: &Gate) -> Result<Vec<Gate>> {
    let (x, z) = (Gate::x(), Gate::z());
    let candidates = [
        vec![],
        vec![x.clone()],
        vec![z.clone()],
        vec![x.clone(), z.clone()],
        vec![z, x],
    ];
    for seq in candidates {
        let product = seq
            .iter()
            .fold(crate::matrix::CMatrix::identity(2), |acc, g| {
                g.matrix() * &acc
            });
        if product.equals_up_to_phase(gate.matrix(), TOLERANCE) {
            return Ok(seq);
        }
    }
    Err(Error::InvalidCircuit(format!(
        "gate {} is not a Pauli up to phase",
        gate.label()
    )))
}

/// Preparation and basis change, without measurement: five qubits, with
/// the input on qubit 1, `|1>` on qubit 2 and `|000>` on qubits 3-5.
pub fn pre_measurement_circuit() -> Circuit {
    Circuit::empty(5)
        .expect("5 qubits")
        .then(&epr_prep_circuit(), 0)
        .and_then(|c| c.then(&ghz_prep_circuit(), 2))
        .and_then(|c| c.then(&basis_change_circuit(), 0))
        .expect("fragments fit")
}

/// Full network: preparation, basis change, `MZ` of qubits 1-3 into bits
/// 0-2 and the correction table as bit-pattern controlled X/Z gates on
/// qubits 4 and 5.
pub fn teleport_network(variant: RuleVariant) -> Result<Circuit> {
    let mut ops = pre_measurement_circuit().ops;
    for q in 1..=3 {
        ops.push(CircuitOp::MeasureZ {
            qubit: q,
            bit: q - 1,
        });
    }
    for branch in 0..8 {
        let outcome = branch_to_outcome(branch);
        for op in correction_plan(ProtocolKind::EprViaGhz, 0.0, outcome, variant)? {
            for g in pauli_sequence(&op.gate)? {
                ops.push(CircuitOp::ClassicallyControlled {
                    gate: g,
                    targets: vec![op.qubit],
                    condition: BitPattern::from_value(branch, 3),
                });
            }
        }
    }
    Circuit::new(5, 3, ops)
}

/// `(alpha|0> + beta|1>) |1> |000>`.
pub fn network_input(coeffs: &UnknownCoeffs) -> StateVector {
    epr_prep_input(coeffs)
        .tensor(&StateVector::zero(3).expect("3 qubits"))
        .expect("5 qubits")
}

/// State of the qubits not in `measured`, given their observed values.
pub fn unmeasured_state(
    state: &StateVector,
    measured: &[usize],
    values: &[bool],
) -> Result<StateVector> {
    let bits: String = values.iter().map(|&b| if b { '1' } else { '0' }).collect();
    let basis = StateVector::from_bits(&bits)?;
    Ok(state.project(&basis, measured)?.normalize()?.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchCheck {
    pub branch: usize,
    pub outcome: Outcome,
    pub circuit_probability: f64,
    pub protocol_probability: f64,
    /// Phase-aligned distance between the circuit's and the protocol's
    /// qubits 4,5.
    pub distance: f64,
    /// Same, between the deferred-measurement network and the explicit one.
    pub deferred_distance: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub coeffs: UnknownCoeffs,
    pub branches: Vec<BranchCheck>,
}

impl EquivalenceReport {
    pub fn max_distance(&self) -> f64 {
        self.branches
            .iter()
            .map(|b| b.distance.max(b.deferred_distance))
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_distance() < TOLERANCE
    }
}

/// Runs every branch of the network and of its deferred form and compares
/// qubits 4,5 with the measurement-based protocol.
pub fn verify_equivalence(
    coeffs: &UnknownCoeffs,
    variant: RuleVariant,
) -> Result<EquivalenceReport> {
    let network = teleport_network(variant)?;
    let deferred = run_circuit(
        &network.deferred()?,
        &network_input(coeffs),
        BranchSelector::Forced(0),
    )?;
    let mut branches = Vec::with_capacity(8);
    for branch in 0..8 {
        let outcome = branch_to_outcome(branch);
        let run = run_circuit(
            &network,
            &network_input(coeffs),
            BranchSelector::Forced(branch),
        )?;
        let held = unmeasured_state(&run.state, &[1, 2, 3], &run.bits)?;
        let t = teleport_epr(coeffs, 0.0, OutcomeSelector::Forced(outcome), variant)?;
        let bits: Vec<bool> = (0..3).map(|i| (branch >> (2 - i)) & 1 == 1).collect();
        let from_deferred = unmeasured_state(&deferred.state, &[1, 2, 3], &bits)?;
        branches.push(BranchCheck {
            branch,
            outcome,
            circuit_probability: run.probability,
            protocol_probability: t.probability,
            distance: held.phase_aligned_distance(&t.final_state)?,
            deferred_distance: from_deferred.phase_aligned_distance(&held)?,
            fidelity: t.fidelity,
        });
    }
    Ok(EquivalenceReport {
        coeffs: *coeffs,
        branches,
    })
}
