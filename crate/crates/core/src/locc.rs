//! Party-level sessions: each party owns some qubits, may only act on
//! those, and learns about the others only through outcome messages.
//!
//! The session engine holds the global state and performs the collapse;
//! parties never see amplitudes.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::basis::MeasurementBasis;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::measure::{measure, Outcome, OutcomeSelector};
use crate::protocol::{
    correction_plan, initial_state, receivers, target_state, Protocol, RuleVariant, UnknownCoeffs,
};
use crate::state::StateVector;
use crate::transcript::{AppliedOp, ClassicalMessage, PartyId, ProtocolKind, Transcript};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Party {
    pub id: PartyId,
    /// Global qubit labels, ascending.
    pub owned: Vec<usize>,
}

/// Who holds which qubit. Alice holds the input and the first carrier
/// qubit; every receiver holds one qubit.
pub fn ownership(kind: ProtocolKind) -> Vec<Party> {
    let recv = receivers(kind);
    let first_receiver = recv.first().map_or(1, |r| r.1);
    let mut parties = vec![Party {
        id: PartyId::Alice,
        owned: (1..first_receiver).collect(),
    }];
    parties.extend(recv.into_iter().map(|(id, q)| Party { id, owned: vec![q] }));
    parties
}

#[derive(Clone, Debug)]
pub struct Session {
    protocol: Protocol,
    coeffs: UnknownCoeffs,
    selector: OutcomeSelector,
    parties: Vec<Party>,
    state: StateVector,
    /// Global labels of the qubits still in `state`, in register order.
    live: Vec<usize>,
    measured: Option<(Outcome, f64)>,
    broadcast_done: bool,
    messages: Vec<ClassicalMessage>,
    operations: Vec<AppliedOp>,
}

impl Session {
    pub fn new(
        kind: ProtocolKind,
        coeffs: UnknownCoeffs,
        phi: f64,
        selector: OutcomeSelector,
    ) -> Result<Self> {
        let protocol = Protocol::new(kind, phi)?;
        let state = initial_state(kind, &coeffs)?;
        let live = (1..=state.n_qubits()).collect();
        Ok(Self {
            protocol,
            coeffs,
            selector,
            parties: ownership(kind),
            state,
            live,
            measured: None,
            broadcast_done: false,
            messages: Vec::new(),
            operations: Vec::new(),
        })
    }

    pub fn kind(&self) -> ProtocolKind {
        self.protocol.kind()
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn party(&self, id: PartyId) -> Option<&Party> {
        self.parties.iter().find(|p| p.id == id)
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn live_qubits(&self) -> &[usize] {
        &self.live
    }

    pub fn messages(&self) -> &[ClassicalMessage] {
        &self.messages
    }

    pub fn operations(&self) -> &[AppliedOp] {
        &self.operations
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.measured.map(|m| m.0)
    }

    fn position(&self, qubit: usize) -> Result<usize> {
        self.live
            .iter()
            .position(|&q| q == qubit)
            .map(|p| p + 1)
            .ok_or(Error::OutOfOrder("qubit is no longer part of the register"))
    }

    /// `party` applies `gate` to its own `qubits` (global labels).
    pub fn local_apply(&mut self, party: PartyId, gate: &Gate, qubits: &[usize]) -> Result<()> {
        let owned = &self
            .party(party)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("no party {party} in session")))?
            .owned;
        if let Some(&q) = qubits.iter().find(|q| !owned.contains(q)) {
            return Err(Error::LocalityViolation { party, qubit: q });
        }
        let positions = qubits
            .iter()
            .map(|&q| self.position(q))
            .collect::<Result<Vec<_>>>()?;
        self.state = self.state.apply_gate(gate, &positions)?;
        self.operations.push(AppliedOp {
            party,
            gate: String::from(gate.label()),
            qubits: qubits.to_vec(),
        });
        Ok(())
    }

    /// Joint measurement of all of Alice's qubits. The collapse removes
    /// them from the register; the others keep their labels.
    pub fn alice_measure(&mut self, basis: &MeasurementBasis) -> Result<Outcome> {
        if self.measured.is_some() {
            return Err(Error::OutOfOrder("Alice has already measured"));
        }
        let alice = self
            .party(PartyId::Alice)
            .expect("every session has Alice")
            .owned
            .clone();
        if basis.m_qubits() != alice.len() {
            return Err(Error::WrongQubitCount {
                expected: alice.len(),
                found: basis.m_qubits(),
            });
        }
        let positions = alice
            .iter()
            .map(|&q| self.position(q))
            .collect::<Result<Vec<_>>>()?;
        let m = measure(&self.state, basis, &positions, self.selector)?;
        self.state = m.post_state.expect("receivers keep their qubits");
        self.live.retain(|q| !alice.contains(q));
        self.measured = Some((m.outcome, m.probability));
        Ok(m.outcome)
    }

    /// Alice sends her outcome to every receiver.
    pub fn broadcast(&mut self) -> Result<()> {
        let Some((outcome, _)) = self.measured else {
            return Err(Error::OutOfOrder("broadcast before measurement"));
        };
        if self.broadcast_done {
            return Err(Error::OutOfOrder("outcome already broadcast"));
        }
        let receivers: Vec<PartyId> = self
            .parties
            .iter()
            .map(|p| p.id)
            .filter(|&id| id != PartyId::Alice)
            .collect();
        for to in receivers {
            self.messages.push(ClassicalMessage {
                seq: self.messages.len(),
                from: PartyId::Alice,
                to,
                payload: outcome,
            });
        }
        self.broadcast_done = true;
        Ok(())
    }

    /// Measure, broadcast, correct, score.
    pub fn run_full(mut self, variant: RuleVariant) -> Result<Transcript> {
        if self.measured.is_some() || !self.operations.is_empty() {
            return Err(Error::OutOfOrder("run_full needs a fresh session"));
        }
        let basis = self.protocol.basis().clone();
        let outcome = self.alice_measure(&basis)?;
        self.broadcast()?;
        let kind = self.kind();
        for op in correction_plan(kind, self.protocol.phi(), outcome, variant)? {
            // each receiver reads its own copy of the message
            let received = self
                .messages
                .iter()
                .find(|m| m.to == op.party)
                .map(|m| m.payload);
            debug_assert_eq!(received, Some(outcome));
            self.local_apply(op.party, &op.gate, &[op.qubit])?;
        }
        let fidelity = self.state.fidelity(&target_state(kind, &self.coeffs)?)?;
        let (outcome, probability) = self.measured.expect("measured above");
        Ok(Transcript {
            protocol: kind,
            coeffs: self.coeffs,
            phi: self.protocol.phi(),
            variant,
            selector: self.selector,
            outcome,
            probability,
            operations: self.operations,
            messages: self.messages,
            fidelity,
            final_state: self.state,
            wall_time: None,
        })
    }
}

/// Replays a transcript's logs against the ownership map of its protocol.
pub fn verify_transcript_locality(transcript: &Transcript) -> Result<()> {
    let parties = ownership(transcript.protocol);
    for op in &transcript.operations {
        let owned = parties
            .iter()
            .find(|p| p.id == op.party)
            .map(|p| p.owned.as_slice())
            .unwrap_or(&[]);
        if let Some(&q) = op.qubits.iter().find(|q| !owned.contains(q)) {
            return Err(Error::LocalityViolation {
                party: op.party,
                qubit: q,
            });
        }
    }
    let alice_qubits = parties[0].owned.len();
    for (i, msg) in transcript.messages.iter().enumerate() {
        if msg.seq != i || msg.from != PartyId::Alice {
            return Err(Error::OutOfOrder("message log out of sequence"));
        }
        if msg.payload.index() >= 1 << alice_qubits {
            return Err(Error::OutcomeOutOfRange {
                k: msg.payload.k(),
                count: 1 << alice_qubits,
            });
        }
    }
    Ok(())
}
