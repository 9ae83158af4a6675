//! Teleportation procedures: the one-qubit reference, the EPR pair through
//! a GHZ triplet to Bob and Claire, and its N-qubit generalization.
//!
//! Every run goes through [`Protocol::run`]: build `input (x) resource`,
//! measure the sender's qubits, announce the outcome, let each receiver
//! undo its factor of `U_k`, and score the receivers' state against the
//! input.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

// Only needed without std; with std linked the inherent f64 methods win.
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::adequacy::{adequacy, correction_for_vector, Correction, InputForm};
use crate::basis::{general_element, MeasurementBasis};
use crate::canonical::{bell, epr_input, ghz_chain, ghz_triplet, nplet, BellKind, EprForm};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::measure::{measure, Outcome, OutcomeSelector};
use crate::state::{Amplitude, StateVector};
use crate::transcript::{AppliedOp, ClassicalMessage, PartyId, ProtocolKind, Transcript};
use crate::TOLERANCE;

/// Largest `N` accepted by the N-qubit protocol.
pub const MAX_NPLET: usize = 10;

/// `alpha, beta` of the unknown state, normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnknownCoeffs {
    alpha: Amplitude,
    beta: Amplitude,
}

impl UnknownCoeffs {
    /// Requires `|alpha|^2 + |beta|^2 = 1` within the global tolerance.
    pub fn new(alpha: Amplitude, beta: Amplitude) -> Result<Self> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { alpha, beta })
    }

    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
    }

    /// Rescales to unit norm if `| |alpha|^2 + |beta|^2 - 1 | <= max_error`.
    /// Also returns that deviation so callers can warn about it.
    pub fn renormalized(alpha: Amplitude, beta: Amplitude, max_error: f64) -> Result<(Self, f64)> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        let error = (norm_sqr - 1.0).abs();
        if !norm_sqr.is_finite() || norm_sqr == 0.0 || error > max_error {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let norm = norm_sqr.sqrt();
        Ok((
            Self {
                alpha: alpha / norm,
                beta: beta / norm,
            },
            error,
        ))
    }

    /// Uniformly (Haar) distributed on the Bloch sphere.
    pub fn haar<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut g = || -> f64 { rng.sample(StandardNormal) };
            let alpha = Complex64::new(g(), g());
            let beta = Complex64::new(g(), g());
            let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
            if norm > 1e-6 {
                return Self {
                    alpha: alpha / norm,
                    beta: beta / norm,
                };
            }
        }
    }

    pub fn alpha(&self) -> Amplitude {
        self.alpha
    }

    pub fn beta(&self) -> Amplitude {
        self.beta
    }
}

/// Which entry of the correction table the receivers use. Only outcome 2
/// of the EPR protocol has an alternative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RuleVariant {
    #[default]
    Main,
    Alternative,
}

/// `U_k = bob (x) claire` for one outcome of the EPR protocol.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionRule {
    pub outcome: Outcome,
    pub bob: Gate,
    pub claire: Gate,
    /// Other `(bob, claire)` pairs giving the same final state.
    pub alternatives: Vec<(Gate, Gate)>,
}

/// `U_k` for the one-qubit protocol, outcomes `Phi+, Phi-, Psi+, Psi-`.
pub fn single_correction_table() -> [Gate; 4] {
    [Gate::x(), Gate::neg_i_y(), Gate::identity(), Gate::z()]
}

/// `U_k` for the EPR protocol measured in `pi1(23)` with `phi = 0`.
/// Outcomes 1-4 are Bob's to fix, 5-8 Claire's.
pub fn epr_correction_table() -> Vec<CorrectionRule> {
    let bob = [Gate::x(), Gate::i_y(), Gate::neg_i_y(), Gate::neg_x()];
    let claire = [Gate::x(), Gate::neg_i_y(), Gate::i_y(), Gate::neg_x()];
    let mut rules = Vec::with_capacity(8);
    for (i, g) in bob.into_iter().enumerate() {
        let alternatives = if i == 1 {
            vec![(Gate::x(), Gate::z())]
        } else {
            Vec::new()
        };
        rules.push(CorrectionRule {
            outcome: Outcome::from_index(i),
            bob: g,
            claire: Gate::identity(),
            alternatives,
        });
    }
    for (i, g) in claire.into_iter().enumerate() {
        rules.push(CorrectionRule {
            outcome: Outcome::from_index(4 + i),
            bob: Gate::identity(),
            claire: g,
            alternatives: Vec::new(),
        });
    }
    rules
}

/// One receiver gate of a correction, on a global qubit label.
#[derive(Clone, Debug, PartialEq)]
pub struct PlannedOp {
    pub party: PartyId,
    pub qubit: usize,
    pub gate: Gate,
}

/// The receiving parties and the qubit each one holds.
pub fn receivers(kind: ProtocolKind) -> Vec<(PartyId, usize)> {
    match kind {
        ProtocolKind::Single => vec![(PartyId::Bob, 3)],
        ProtocolKind::EprViaGhz => vec![(PartyId::Bob, 4), (PartyId::Claire, 5)],
        ProtocolKind::Nplet(n) => (1..=n).map(|j| (PartyId::Receiver(j), n + 1 + j)).collect(),
    }
}

fn check_kind(kind: ProtocolKind) -> Result<()> {
    match kind {
        ProtocolKind::Nplet(n) if !(2..=MAX_NPLET).contains(&n) => Err(Error::InvalidParameter(
            format!("N must be in 2..={MAX_NPLET}, got {n}"),
        )),
        _ => Ok(()),
    }
}

/// Qubits holding the unknown state (and hence the receivers' target).
fn input_form(kind: ProtocolKind) -> Option<InputForm> {
    match kind {
        ProtocolKind::Single => None,
        ProtocolKind::EprViaGhz => Some(InputForm::Epr(EprForm::AntiDiagonal)),
        ProtocolKind::Nplet(n) => Some(InputForm::Nplet(n)),
    }
}

fn carrier_qubits(kind: ProtocolKind) -> usize {
    match kind {
        ProtocolKind::Single => 2,
        ProtocolKind::EprViaGhz => 3,
        ProtocolKind::Nplet(n) => n + 1,
    }
}

/// The state the receivers should end up with.
pub fn target_state(kind: ProtocolKind, coeffs: &UnknownCoeffs) -> Result<StateVector> {
    check_kind(kind)?;
    match kind {
        ProtocolKind::Single => StateVector::new(1, vec![coeffs.alpha(), coeffs.beta()]),
        ProtocolKind::EprViaGhz => Ok(epr_input(coeffs, EprForm::AntiDiagonal)),
        ProtocolKind::Nplet(n) => nplet(coeffs, n),
    }
}

/// `input (x) resource` before any measurement.
pub fn initial_state(kind: ProtocolKind, coeffs: &UnknownCoeffs) -> Result<StateVector> {
    let input = target_state(kind, coeffs)?;
    let resource = match kind {
        ProtocolKind::Single => bell(BellKind::PsiPlus),
        ProtocolKind::EprViaGhz => ghz_triplet(),
        ProtocolKind::Nplet(n) => ghz_chain(n + 1)?,
    };
    input.tensor(&resource)
}

/// Gates the receivers apply for `outcome`: the inverse of each factor of
/// `U_k`, identities left out.
pub fn correction_plan(
    kind: ProtocolKind,
    phi: f64,
    outcome: Outcome,
    variant: RuleVariant,
) -> Result<Vec<PlannedOp>> {
    check_kind(kind)?;
    let factors: Vec<Gate> = match kind {
        ProtocolKind::Single => {
            let table = single_correction_table();
            let g = table.get(outcome.index()).ok_or(Error::OutcomeOutOfRange {
                k: outcome.k(),
                count: 4,
            })?;
            vec![g.clone()]
        }
        ProtocolKind::EprViaGhz if phi == 0.0 => {
            let table = epr_correction_table();
            let rule = table.get(outcome.index()).ok_or(Error::OutcomeOutOfRange {
                k: outcome.k(),
                count: 8,
            })?;
            match (variant, rule.alternatives.first()) {
                (RuleVariant::Alternative, Some((b, c))) => vec![b.clone(), c.clone()],
                _ => vec![rule.bob.clone(), rule.claire.clone()],
            }
        }
        ProtocolKind::EprViaGhz | ProtocolKind::Nplet(_) => {
            let n = receivers(kind).len();
            let (vector, _) = general_element(n, phi, outcome.index())?;
            let form = input_form(kind).expect("multi-qubit protocol");
            let correction = correction_for_vector(&vector, form, carrier_qubits(kind))?
                .ok_or(Error::ZeroProbabilityOutcome { k: outcome.k() })?;
            local_gates(&correction)?
        }
    };
    Ok(plan_from_factors(kind, factors))
}

fn plan_from_factors(kind: ProtocolKind, factors: Vec<Gate>) -> Vec<PlannedOp> {
    receivers(kind)
        .into_iter()
        .zip(factors)
        .filter(|(_, g)| !g.is_identity())
        .map(|((party, qubit), g)| PlannedOp {
            party,
            qubit,
            gate: g.adjoint(),
        })
        .collect()
}

fn local_gates(correction: &Correction) -> Result<Vec<Gate>> {
    let factors = correction.local_factors().ok_or_else(|| {
        Error::InvalidParameter(String::from(
            "correction does not factor over the receivers",
        ))
    })?;
    factors
        .iter()
        .map(|f| Gate::from_unitary(f.clone(), "U"))
        .collect()
}

/// The measurement basis of a protocol.
pub fn protocol_basis(kind: ProtocolKind, phi: f64) -> Result<MeasurementBasis> {
    check_kind(kind)?;
    match kind {
        ProtocolKind::Single => Ok(MeasurementBasis::bell()),
        ProtocolKind::EprViaGhz => Ok(MeasurementBasis::pi1_23_s4(phi)),
        ProtocolKind::Nplet(n) => MeasurementBasis::general(n, phi),
    }
}

/// A protocol with its measurement basis built once, for repeated runs.
#[derive(Clone, Debug)]
pub struct Protocol {
    kind: ProtocolKind,
    phi: f64,
    basis: MeasurementBasis,
}

impl Protocol {
    pub fn new(kind: ProtocolKind, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "phi must be finite, got {phi}"
            )));
        }
        let basis = protocol_basis(kind, phi)?;
        Ok(Self { kind, phi, basis })
    }

    pub fn kind(&self) -> ProtocolKind {
        self.kind
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn basis(&self) -> &MeasurementBasis {
        &self.basis
    }

    /// Qubits measured by Alice.
    pub fn sender_qubits(&self) -> Vec<usize> {
        (1..=self.basis.m_qubits()).collect()
    }

    pub fn run(
        &self,
        coeffs: &UnknownCoeffs,
        selector: OutcomeSelector,
        variant: RuleVariant,
    ) -> Result<Transcript> {
        let state = initial_state(self.kind, coeffs)?;
        let m = self.basis.m_qubits();
        let measurement = measure(&state, &self.basis, &self.sender_qubits(), selector)?;
        let outcome = measurement.outcome;
        let mut held = measurement
            .post_state
            .expect("receivers keep unmeasured qubits");
        let messages = receivers(self.kind)
            .into_iter()
            .enumerate()
            .map(|(seq, (to, _))| ClassicalMessage {
                seq,
                from: PartyId::Alice,
                to,
                payload: outcome,
            })
            .collect();
        let mut operations = Vec::new();
        for op in correction_plan(self.kind, self.phi, outcome, variant)? {
            held = held.apply_gate(&op.gate, &[op.qubit - m])?;
            operations.push(AppliedOp {
                party: op.party,
                gate: String::from(op.gate.label()),
                qubits: vec![op.qubit],
            });
        }
        let fidelity = held.fidelity(&target_state(self.kind, coeffs)?)?;
        Ok(Transcript {
            protocol: self.kind,
            coeffs: *coeffs,
            phi: self.phi,
            variant,
            selector,
            outcome,
            probability: measurement.probability,
            operations,
            messages,
            fidelity,
            final_state: held,
            wall_time: None,
        })
    }

    /// [`correction_plan`] for every outcome, in basis order. Derived
    /// corrections come from a single adequacy pass over the basis.
    pub fn correction_plans(&self, variant: RuleVariant) -> Result<Vec<Vec<PlannedOp>>> {
        let tabulated = match self.kind {
            ProtocolKind::Single => true,
            ProtocolKind::EprViaGhz => self.phi == 0.0,
            ProtocolKind::Nplet(_) => false,
        };
        if tabulated {
            return (0..self.basis.len())
                .map(|i| correction_plan(self.kind, self.phi, Outcome::from_index(i), variant))
                .collect();
        }
        let form = input_form(self.kind).expect("multi-qubit protocol");
        adequacy(&self.basis, form, carrier_qubits(self.kind))?
            .corrections
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let c = c
                    .as_ref()
                    .ok_or(Error::ZeroProbabilityOutcome { k: i + 1 })?;
                Ok(plan_from_factors(self.kind, local_gates(c)?))
            })
            .collect()
    }

    /// Probability, receiver gates and final fidelity of every outcome for
    /// one input, from a single projection pass.
    pub fn outcome_table(
        &self,
        coeffs: &UnknownCoeffs,
        variant: RuleVariant,
    ) -> Result<Vec<OutcomeRow>> {
        let state = initial_state(self.kind, coeffs)?;
        let target = target_state(self.kind, coeffs)?;
        let m = self.basis.m_qubits();
        let residuals = state.project_many(self.basis.vectors(), &self.sender_qubits())?;
        residuals
            .iter()
            .zip(self.correction_plans(variant)?)
            .enumerate()
            .map(|(i, (r, plan))| {
                let (mut held, _) = r.normalize()?;
                for op in &plan {
                    held = held.apply_gate(&op.gate, &[op.qubit - m])?;
                }
                Ok(OutcomeRow {
                    outcome: Outcome::from_index(i),
                    probability: r.probability(),
                    fidelity: held.fidelity(&target)?,
                    plan,
                })
            })
            .collect()
    }
}

/// One line of [`Protocol::outcome_table`].
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeRow {
    pub outcome: Outcome,
    pub probability: f64,
    pub plan: Vec<PlannedOp>,
    pub fidelity: f64,
}

/// One qubit through a shared `Psi+` pair; Bob holds qubit 3.
pub fn teleport_single(coeffs: &UnknownCoeffs, selector: OutcomeSelector) -> Result<Transcript> {
    Protocol::new(ProtocolKind::Single, 0.0)?.run(coeffs, selector, RuleVariant::Main)
}

/// `alpha|01> + beta|10>` to Bob (qubit 4) and Claire (qubit 5).
pub fn teleport_epr(
    coeffs: &UnknownCoeffs,
    phi: f64,
    selector: OutcomeSelector,
    variant: RuleVariant,
) -> Result<Transcript> {
    Protocol::new(ProtocolKind::EprViaGhz, phi)?.run(coeffs, selector, variant)
}

/// `alpha|0..0> + beta|1..1>` on `n` qubits to `n` receivers.
pub fn teleport_nplet(
    coeffs: &UnknownCoeffs,
    n: usize,
    phi: f64,
    selector: OutcomeSelector,
) -> Result<Transcript> {
    Protocol::new(ProtocolKind::Nplet(n), phi)?.run(coeffs, selector, RuleVariant::Main)
}

/// One term of the expansion of `input (x) GHZ` over a 3-qubit basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionTerm {
    pub outcome: Outcome,
    pub label: String,
    /// Normalized state of qubits 4,5; `None` when the term vanishes.
    pub residual: Option<StateVector>,
    pub coefficient_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
    pub basis_tag: &'static str,
    pub terms: Vec<ExpansionTerm>,
}

impl ExpansionReport {
    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient_norm.powi(2)).sum()
    }
}

/// Expands `(alpha|01> + beta|10>) (x) GHZ_345` over a basis of qubits
/// 1-3, as `sum_k c_k |basis_k> |residual_k>`.
pub fn expand_epr(coeffs: &UnknownCoeffs, basis: &MeasurementBasis) -> Result<ExpansionReport> {
    if basis.m_qubits() != 3 {
        return Err(Error::WrongQubitCount {
            expected: 3,
            found: basis.m_qubits(),
        });
    }
    if basis.gram_deviation() > TOLERANCE {
        return Err(Error::NonOrthonormalBasis);
    }
    let state = epr_input(coeffs, EprForm::AntiDiagonal).tensor(&ghz_triplet())?;
    let residuals = state.project_many(basis.vectors(), &[1, 2, 3])?;
    let terms = residuals
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let (residual, coefficient_norm) = if r.is_zero(TOLERANCE) {
                (None, r.probability().sqrt())
            } else {
                let (s, norm) = r.normalize()?;
                (Some(s), norm)
            };
            Ok(ExpansionTerm {
                outcome: Outcome::from_index(i),
                label: basis.labels()[i].clone(),
                residual,
                coefficient_norm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpansionReport {
        basis_tag: basis.family().tag(),
        terms,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionFailure {
    pub outcome: Outcome,
    pub coeffs: UnknownCoeffs,
    pub deviation: f64,
}

/// Outcome of [`verify_corrections`].
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionCheck {
    pub kind: ProtocolKind,
    pub phi: f64,
    pub trials: usize,
    pub outcomes: usize,
    /// Largest entrywise distance between the post-measurement receiver
    /// state and `U_k rho_in U_k^dagger` (exact for small registers, a
    /// linear-time upper bound otherwise).
    pub max_deviation: f64,
    pub min_fidelity: f64,
    /// Largest `|p_k - 2^-m|` over all outcomes and trials.
    pub max_probability_error: f64,
    pub failures: Vec<CorrectionFailure>,
}

impl CorrectionCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Largest receiver register compared through full density matrices.
const DENSE_CHECK_QUBITS: usize = 6;

/// Checks, for `trials` seeded Haar-random inputs and every outcome, that
/// the receivers' state after projection equals `U_k |input>` up to phase
/// and that correcting it restores the input.
pub fn verify_corrections(
    kind: ProtocolKind,
    phi: f64,
    trials: usize,
    seed: u64,
) -> Result<CorrectionCheck> {
    let protocol = Protocol::new(kind, phi)?;
    let Some(form) = input_form(kind) else {
        return Err(Error::InvalidParameter(String::from(
            "correction check needs a GHZ-carrier protocol",
        )));
    };
    let basis = protocol.basis();
    let count = basis.len();
    let corrections: Vec<Correction> = if kind == ProtocolKind::EprViaGhz && phi == 0.0 {
        epr_correction_table()
            .into_iter()
            .map(|r| Correction::Local(vec![r.bob.matrix().clone(), r.claire.matrix().clone()]))
            .collect()
    } else {
        adequacy(basis, form, carrier_qubits(kind))?
            .corrections
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or(Error::ZeroProbabilityOutcome { k: i + 1 }))
            .collect::<Result<_>>()?
    };
    // U_k applied to the images of (1,0) and (0,1); U_k|input> is linear in them.
    let e0 = form.state(&UnknownCoeffs::real(1.0, 0.0)?)?;
    let e1 = form.state(&UnknownCoeffs::real(0.0, 1.0)?)?;
    let images: Vec<[StateVector; 2]> = corrections
        .iter()
        .map(|c| Ok([c.apply(&e0)?, c.apply(&e1)?]))
        .collect::<Result<_>>()?;

    let receivers = form.qubits();
    let uniform = 1.0 / count as f64;
    let mut rng = OutcomeSelector::rng(seed);
    let mut check = CorrectionCheck {
        kind,
        phi,
        trials,
        outcomes: count,
        max_deviation: 0.0,
        min_fidelity: 1.0,
        max_probability_error: 0.0,
        failures: Vec::new(),
    };
    for trial in 0..trials {
        let coeffs = UnknownCoeffs::haar(&mut rng);
        let state = initial_state(kind, &coeffs)?;
        let target = target_state(kind, &coeffs)?;
        let residuals = state.project_many(basis.vectors(), &protocol.sender_qubits())?;
        for (k, r) in residuals.iter().enumerate() {
            let p = r.probability();
            check.max_probability_error = check.max_probability_error.max((p - uniform).abs());
            let outcome = Outcome::from_index(k);
            let [e0k, e1k] = &images[k];
            let expected =
                |i: usize| coeffs.alpha() * e0k.amps()[i] + coeffs.beta() * e1k.amps()[i];
            let (deviation, fidelity) = if p <= TOLERANCE * TOLERANCE {
                (1.0, 0.0)
            } else if receivers <= DENSE_CHECK_QUBITS {
                let (actual, _) = r.normalize()?;
                let expected =
                    StateVector::new(receivers, (0..actual.dim()).map(expected).collect())?;
                let mut fidelity = expected.fidelity(&actual)?;
                // F(U^dagger r, t) = F(r, U t); the explicit undo is
                // exercised on the first trial.
                if trial == 0 {
                    fidelity = fidelity.min(corrections[k].undo(&actual)?.fidelity(&target)?);
                }
                (pure_density_diff(&expected, &actual), fidelity)
            } else {
                let inv = 1.0 / p.sqrt();
                let amps = r.amps();
                let overlap: Amplitude = (0..amps.len())
                    .map(|i| expected(i).conj() * amps[i] * inv)
                    .sum();
                let mut fidelity = overlap.norm_sqr();
                if trial == 0 {
                    let (actual, _) = r.normalize()?;
                    fidelity = fidelity.min(corrections[k].undo(&actual)?.fidelity(&target)?);
                }
                (pure_density_bound(expected, amps, inv, overlap), fidelity)
            };
            check.max_deviation = check.max_deviation.max(deviation);
            check.min_fidelity = check.min_fidelity.min(fidelity);
            if deviation > TOLERANCE || fidelity < 1.0 - TOLERANCE {
                check.failures.push(CorrectionFailure {
                    outcome,
                    coeffs,
                    deviation,
                });
            }
        }
    }
    Ok(check)
}

/// `max |a_i conj(a_j) - b_i conj(b_j)|` without forming the matrices.
fn pure_density_diff(a: &StateVector, b: &StateVector) -> f64 {
    let mut worst = 0.0f64;
    for (ai, bi) in a.amps().iter().zip(b.amps()) {
        for (aj, bj) in a.amps().iter().zip(b.amps()) {
            worst = worst.max((ai * aj.conj() - bi * bj.conj()).norm());
        }
    }
    worst
}

/// Upper bound on `max |e_i conj(e_j) - a_i conj(a_j)|` in linear time,
/// where `e_i = expected(i)` and `a = scale * actual` with `overlap =
/// <e|a>`: with `a'` the phase-aligned `a`, every entry is at most
/// `2 max|e| max|e - a'|`.
fn pure_density_bound(
    expected: impl Fn(usize) -> Amplitude,
    actual: &[Amplitude],
    scale: f64,
    overlap: Amplitude,
) -> f64 {
    let phase = if overlap.norm() > 0.0 {
        overlap.conj() / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let (mut emax, mut dmax) = (0.0f64, 0.0f64);
    for (i, a) in actual.iter().enumerate() {
        let e = expected(i);
        emax = emax.max(e.norm());
        dmax = dmax.max((e - phase * a * scale).norm());
    }
    2.0 * emax * dmax
}

/// Best fidelity to `target` reachable by a single-qubit unitary on
/// `qubit` alone, searched over Euler angles on a 20-point grid and then
/// refined by coordinate descent.
pub fn best_single_qubit_fidelity(
    state: &StateVector,
    target: &StateVector,
    qubit: usize,
) -> Result<f64> {
    use core::f64::consts::PI;
    let score = |angles: [f64; 3]| -> Result<f64> {
        let g = Gate::new("U", euler(angles))?;
        state.apply_gate(&g, &[qubit])?.fidelity(target)
    };
    const GRID: usize = 20;
    let mut best = ([0.0; 3], score([0.0; 3])?);
    for i in 0..GRID {
        for j in 0..=GRID {
            for l in 0..GRID {
                let a = [
                    2.0 * PI * i as f64 / GRID as f64,
                    PI * j as f64 / GRID as f64,
                    2.0 * PI * l as f64 / GRID as f64,
                ];
                let f = score(a)?;
                if f > best.1 {
                    best = (a, f);
                }
            }
        }
    }
    let mut step = PI / GRID as f64;
    while step > 1e-9 {
        let mut improved = false;
        for axis in 0..3 {
            for dir in [-1.0, 1.0] {
                let mut a = best.0;
                a[axis] += dir * step;
                let f = score(a)?;
                if f > best.1 {
                    best = (a, f);
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Ok(best.1)
}

/// `Rz(a) Ry(b) Rz(c)`.
fn euler([a, b, c]: [f64; 3]) -> crate::matrix::CMatrix {
    let (cb, sb) = ((b / 2.0).cos(), (b / 2.0).sin());
    let e = |t: f64| Complex64::from_polar(1.0, t / 2.0);
    crate::matrix::CMatrix::from_rows(&[
        [e(-a - c) * cb, -e(-a + c) * sb],
        [e(a - c) * sb, e(a + c) * cb],
    ])
    .expect("2x2")
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = core::f64::consts::FRAC_1_SQRT_2;

    fn forced(k: usize) -> OutcomeSelector {
        OutcomeSelector::Forced(Outcome::from_k(k))
    }

    #[test]
    fn coefficient_validation() {
        assert!(UnknownCoeffs::real(1.0, 1.0).is_err());
        assert!(UnknownCoeffs::real(0.6, 0.8).is_ok());
        let (c, err) = UnknownCoeffs::renormalized(
            Complex64::new(0.6, 0.0),
            Complex64::new(0.8000001, 0.0),
            1e-6,
        )
        .unwrap();
        assert!(err > 0.0 && err < 1e-6);
        assert!((c.alpha().norm_sqr() + c.beta().norm_sqr() - 1.0).abs() < 1e-15);
        assert!(UnknownCoeffs::renormalized(
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            1e-6
        )
        .is_err());
    }

    #[test]
    fn haar_coefficients_are_normalized_and_seeded() {
        let mut a = OutcomeSelector::rng(3);
        let mut b = OutcomeSelector::rng(3);
        for _ in 0..50 {
            let x = UnknownCoeffs::haar(&mut a);
            assert_eq!(x, UnknownCoeffs::haar(&mut b));
            assert!((x.alpha().norm_sqr() + x.beta().norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_psi_plus_needs_no_correction() {
        let c = UnknownCoeffs::real(1.0, 0.0).unwrap();
        let t = teleport_single(&c, forced(3)).unwrap();
        assert!(t.operations.is_empty());
        assert!((t.fidelity - 1.0).abs() < 1e-12);
        assert!((t.final_state.amplitude(0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epr_outcome_one_bob_flips() {
        let c = UnknownCoeffs::real(S, S).unwrap();
        let t = teleport_epr(&c, 0.0, forced(1), RuleVariant::Main).unwrap();
        assert_eq!(t.operations.len(), 1);
        assert_eq!(t.operations[0].party, PartyId::Bob);
        assert_eq!(t.operations[0].gate, "X");
        assert_eq!(t.operations[0].qubits, [4]);
        assert!((t.fidelity - 1.0).abs() < 1e-12);
        assert_eq!(t.messages.len(), 2);
    }

    #[test]
    fn alternative_rule_uses_both_receivers() {
        let c = UnknownCoeffs::real(0.6, 0.8).unwrap();
        let t = teleport_epr(&c, 0.0, forced(2), RuleVariant::Alternative).unwrap();
        let parties: Vec<_> = t
            .operations
            .iter()
            .map(|o| (o.party, o.gate.as_str()))
            .collect();
        assert_eq!(parties, [(PartyId::Bob, "X"), (PartyId::Claire, "Z")]);
        assert!((t.fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nplet_bounds() {
        let c = UnknownCoeffs::real(0.6, 0.8).unwrap();
        assert!(teleport_nplet(&c, 1, 0.0, forced(1)).is_err());
        assert!(teleport_nplet(&c, 11, 0.0, forced(1)).is_err());
    }

    #[test]
    fn euler_matrix_is_unitary() {
        for a in [[0.0, 0.0, 0.0], [0.3, 1.1, -2.0], [3.0, 2.0, 1.0]] {
            assert!(euler(a).is_unitary(1e-12));
        }
    }
}
