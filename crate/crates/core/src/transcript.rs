//! Record of one protocol run: who did what, what was sent, how it ended.

use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

use crate::measure::{Outcome, OutcomeSelector};
use crate::protocol::{RuleVariant, UnknownCoeffs};
use crate::state::StateVector;

/// A participant. Receivers of the N-party protocol are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartyId {
    Alice,
    Bob,
    Claire,
    Receiver(usize),
}

impl core::fmt::Display for PartyId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PartyId::Alice => f.write_str("Alice"),
            PartyId::Bob => f.write_str("Bob"),
            PartyId::Claire => f.write_str("Claire"),
            PartyId::Receiver(j) => write!(f, "R{j}"),
        }
    }
}

impl PartyId {
    /// Inverse of `Display`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "Alice" => Some(PartyId::Alice),
            "Bob" => Some(PartyId::Bob),
            "Claire" => Some(PartyId::Claire),
            _ => s
                .strip_prefix('R')
                .and_then(|j| j.parse().ok())
                .filter(|&j| j >= 1)
                .map(PartyId::Receiver),
        }
    }
}

/// A unitary applied by one party. Qubits use the protocol's global labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppliedOp {
    pub party: PartyId,
    pub gate: String,
    pub qubits: Vec<usize>,
}

/// The only thing that crosses between parties: an outcome index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalMessage {
    pub seq: usize,
    pub from: PartyId,
    pub to: PartyId,
    pub payload: Outcome,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    /// One qubit through a Bell pair.
    Single,
    /// `alpha|01> + beta|10>` through a GHZ triplet to Bob and Claire.
    EprViaGhz,
    /// `alpha|0..0> + beta|1..1>` on `N` qubits through an `N+1` GHZ chain.
    Nplet(usize),
}

impl ProtocolKind {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Single => "single",
            ProtocolKind::EprViaGhz => "epr-via-ghz",
            ProtocolKind::Nplet(_) => "nplet",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    pub protocol: ProtocolKind,
    pub coeffs: UnknownCoeffs,
    pub phi: f64,
    pub variant: RuleVariant,
    pub selector: OutcomeSelector,
    pub outcome: Outcome,
    pub probability: f64,
    pub operations: Vec<AppliedOp>,
    pub messages: Vec<ClassicalMessage>,
    pub fidelity: f64,
    /// Receivers' joint state after correction.
    pub final_state: StateVector,
    pub wall_time: Option<Duration>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn party_names_round_trip() {
        for p in [
            PartyId::Alice,
            PartyId::Bob,
            PartyId::Claire,
            PartyId::Receiver(1),
            PartyId::Receiver(12),
        ] {
            assert_eq!(PartyId::parse(&p.to_string()), Some(p));
        }
        assert_eq!(PartyId::parse("R0"), None);
        assert_eq!(PartyId::parse("Dave"), None);
    }
}
