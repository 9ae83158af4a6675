//! Exact state-vector simulation of EPR-pair teleportation through GHZ
//! entanglement.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * a small dense complex engine ([`StateVector`], [`DensityMatrix`],
//!   [`Gate`], projective measurement with seeded sampling),
//! * constructors for the named states of the protocol and bipartite
//!   entanglement analysis ([`canonical`], [`entanglement`]),
//! * measurement-basis families, their `s`-parameter classification and an
//!   adequacy checker that derives correction unitaries ([`basis`],
//!   [`adequacy`]),
//! * the teleportation procedures themselves ([`protocol`]), a party-level
//!   LOCC session ([`locc`]) and a gate network with classically controlled
//!   corrections ([`circuit`]).
//!
//! Qubits are numbered from 1. Qubit `j` of an `n`-qubit register lives at
//! bit `n - j` of the amplitude index, so `|q1 q2 ... qn>` reads as a binary
//! number.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod adequacy;
pub mod basis;
pub mod canonical;
pub mod circuit;
pub mod density;
pub mod entanglement;
pub mod error;
pub mod gate;
pub mod locc;
pub mod matrix;
pub mod measure;
pub mod protocol;
pub mod state;
pub mod transcript;

pub use adequacy::{adequacy, AdequacyReport, Correction, InputForm, Verdict};
pub use basis::{BasisClassification, BasisFamily, MeasurementBasis, SParameter};
pub use canonical::{BellKind, EprForm};
pub use density::DensityMatrix;
pub use entanglement::EntanglementClass;
pub use error::{Error, Result};
pub use gate::Gate;
pub use matrix::CMatrix;
pub use measure::{Measurement, Outcome, OutcomeSelector};
pub use protocol::{RuleVariant, UnknownCoeffs};
pub use state::{Amplitude, Residual, StateVector};
pub use transcript::{AppliedOp, ClassicalMessage, PartyId, ProtocolKind, Transcript};

/// Absolute tolerance for every exactness check on amplitudes.
pub const TOLERANCE: f64 = 1e-10;

/// Singular values above this count towards a Schmidt rank.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// Largest register the engine will allocate.
pub const MAX_QUBITS: usize = 24;
