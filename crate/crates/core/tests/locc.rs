use ghz_teleport_core::basis::MeasurementBasis;
use ghz_teleport_core::locc::{verify_transcript_locality, Session};
use ghz_teleport_core::protocol::teleport_epr;
use ghz_teleport_core::{
    AppliedOp, Error, Gate, Outcome, OutcomeSelector, PartyId, ProtocolKind, RuleVariant,
    UnknownCoeffs,
};

const TOL: f64 = 1e-10;

fn coeffs() -> UnknownCoeffs {
    UnknownCoeffs::real(0.6, 0.8).unwrap()
}

fn session(kind: ProtocolKind, selector: OutcomeSelector) -> Session {
    Session::new(kind, coeffs(), 0.0, selector).unwrap()
}

#[test]
fn session_shapes() {
    let s = session(ProtocolKind::EprViaGhz, OutcomeSelector::Seeded(1));
    assert_eq!(s.state().n_qubits(), 5);
    assert_eq!(s.party(PartyId::Alice).unwrap().owned.len(), 3);
    let s = session(ProtocolKind::Nplet(4), OutcomeSelector::Seeded(1));
    assert_eq!(s.state().n_qubits(), 9);
    assert_eq!(
        s.parties()
            .iter()
            .filter(|p| p.id != PartyId::Alice)
            .count(),
        4
    );
}

#[test]
fn local_operations() {
    let mut s = session(ProtocolKind::EprViaGhz, OutcomeSelector::Seeded(1));
    s.local_apply(PartyId::Bob, &Gate::x(), &[4]).unwrap();
    assert_eq!(
        s.local_apply(PartyId::Bob, &Gate::x(), &[5]).unwrap_err(),
        Error::LocalityViolation {
            party: PartyId::Bob,
            qubit: 5
        }
    );
    s.local_apply(PartyId::Claire, &Gate::neg_i_y(), &[5])
        .unwrap();
}

#[test]
fn measurement_and_broadcast() {
    let basis = MeasurementBasis::pi1_23_s4(0.0);
    let mut s = session(
        ProtocolKind::EprViaGhz,
        OutcomeSelector::Forced(Outcome::from_k(3)),
    );
    assert!(s.alice_measure(&MeasurementBasis::bell()).is_err());
    assert_eq!(s.alice_measure(&basis).unwrap(), Outcome::from_k(3));
    s.broadcast().unwrap();
    assert_eq!(s.messages().len(), 2);
    assert!(s.messages().iter().all(|m| m.payload.k() == 3));
    assert_eq!(
        s.broadcast().unwrap_err(),
        Error::OutOfOrder("outcome already broadcast")
    );

    let mut s = session(ProtocolKind::Nplet(3), OutcomeSelector::Seeded(5));
    let basis = MeasurementBasis::general(3, 0.0).unwrap();
    s.alice_measure(&basis).unwrap();
    s.broadcast().unwrap();
    assert_eq!(s.messages().len(), 3);
}

#[test]
fn sampled_outcomes_are_uniform() {
    let mut counts = [0usize; 8];
    for seed in 0..800 {
        let t = session(ProtocolKind::EprViaGhz, OutcomeSelector::Seeded(seed))
            .run_full(RuleVariant::Main)
            .unwrap();
        assert!((t.probability - 0.125).abs() < TOL);
        counts[t.outcome.index()] += 1;
    }
    // binomial(800, 1/8): sd ~ 9.35
    assert!(
        counts
            .iter()
            .all(|&c| (c as f64 - 100.0).abs() < 5.0 * 9.36),
        "{counts:?}"
    );
}

#[test]
fn full_runs() {
    let t = session(ProtocolKind::EprViaGhz, OutcomeSelector::Seeded(42))
        .run_full(RuleVariant::Main)
        .unwrap();
    assert!((t.fidelity - 1.0).abs() < TOL);
    verify_transcript_locality(&t).unwrap();

    for k in 1..=128 {
        let t = session(
            ProtocolKind::Nplet(6),
            OutcomeSelector::Forced(Outcome::from_k(k)),
        )
        .run_full(RuleVariant::Main)
        .unwrap();
        assert!((t.fidelity - 1.0).abs() < TOL, "k={k}");
    }

    let t = session(
        ProtocolKind::EprViaGhz,
        OutcomeSelector::Forced(Outcome::from_k(2)),
    )
    .run_full(RuleVariant::Alternative)
    .unwrap();
    let parties: Vec<PartyId> = t.operations.iter().map(|o| o.party).collect();
    assert_eq!(parties, [PartyId::Bob, PartyId::Claire]);
    assert!((t.fidelity - 1.0).abs() < TOL);
}

#[test]
fn matches_monolithic_runs() {
    for seed in 0..40 {
        let selector = OutcomeSelector::Seeded(seed);
        let a = session(ProtocolKind::EprViaGhz, selector)
            .run_full(RuleVariant::Main)
            .unwrap();
        let b = teleport_epr(&coeffs(), 0.0, selector, RuleVariant::Main).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.operations, b.operations);
        assert_eq!(a.final_state, b.final_state);
    }
}

#[test]
fn replay_rejects_injected_operations() {
    let mut t = session(ProtocolKind::EprViaGhz, OutcomeSelector::Seeded(3))
        .run_full(RuleVariant::Main)
        .unwrap();
    t.operations.push(AppliedOp {
        party: PartyId::Claire,
        gate: "X".into(),
        qubits: vec![4],
    });
    assert_eq!(
        verify_transcript_locality(&t).unwrap_err(),
        Error::LocalityViolation {
            party: PartyId::Claire,
            qubit: 4
        }
    );
}
