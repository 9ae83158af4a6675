use ghz_teleport_core::basis::MeasurementBasis;
use ghz_teleport_core::protocol::{
    best_single_qubit_fidelity, epr_correction_table, expand_epr, target_state, teleport_epr,
    teleport_nplet, teleport_single, verify_corrections, Protocol,
};
use ghz_teleport_core::{
    Error, Gate, Outcome, OutcomeSelector, PartyId, ProtocolKind, RuleVariant, StateVector,
    UnknownCoeffs,
};
use num_complex::Complex64 as C;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn forced(k: usize) -> OutcomeSelector {
    OutcomeSelector::Forced(Outcome::from_k(k))
}

fn coeffs(a: C, b: C) -> UnknownCoeffs {
    UnknownCoeffs::new(a, b).unwrap()
}

/// `a|00> + b|11>` or `a|01> + b|10>` on two qubits, written out.
fn two_qubit(amps: [C; 4]) -> StateVector {
    StateVector::new(2, amps.to_vec()).unwrap()
}

#[test]
fn coefficient_validation() {
    assert!(matches!(
        UnknownCoeffs::real(1.0, 1.0),
        Err(Error::NotNormalized { .. })
    ));
    let (c, err) =
        UnknownCoeffs::renormalized(C::new(0.6, 0.0), C::new(0.8 + 1e-8, 0.0), 1e-6).unwrap();
    assert!(err > 0.0 && err < 1e-6);
    assert!(((c.alpha().norm_sqr() + c.beta().norm_sqr()) - 1.0).abs() < 1e-14);
    assert!(UnknownCoeffs::renormalized(C::new(1.0, 0.0), C::new(1.0, 0.0), 1e-6).is_err());
}

#[test]
fn single_qubit_reference() {
    let t = teleport_single(&UnknownCoeffs::real(1.0, 0.0).unwrap(), forced(3)).unwrap();
    assert!(t.operations.is_empty());
    assert_eq!(t.final_state, StateVector::from_bits("0").unwrap());
    assert!((t.fidelity - 1.0).abs() < TOL);

    let c = coeffs(C::new(0.6, 0.0), C::new(0.0, 0.8));
    for k in 1..=4 {
        let t = teleport_single(&c, forced(k)).unwrap();
        assert!((t.probability - 0.25).abs() < TOL);
        assert!((t.fidelity - 1.0).abs() < TOL);
    }
}

#[test]
fn expansion_residuals() {
    let c = coeffs(C::new(0.6, 0.0), C::new(0.0, 0.8));
    let (a, b) = (c.alpha(), c.beta());
    let z = C::new(0.0, 0.0);
    let report = expand_epr(&c, &MeasurementBasis::pi1_23_s4(0.0)).unwrap();
    assert_eq!(report.terms.len(), 8);
    assert!((report.total_weight() - 1.0).abs() < TOL);
    for t in &report.terms {
        assert!((t.coefficient_norm.powi(2) - 0.125).abs() < TOL);
    }
    let k1 = report.terms[0].residual.as_ref().unwrap();
    assert!((k1.fidelity(&two_qubit([b, z, z, a])).unwrap() - 1.0).abs() < TOL);
    let k5 = report.terms[4].residual.as_ref().unwrap();
    assert!((k5.fidelity(&two_qubit([a, z, z, b])).unwrap() - 1.0).abs() < TOL);
}

#[test]
fn correction_table_rules() {
    let table = epr_correction_table();
    assert_eq!(table[0].bob, Gate::x());
    assert!(table[0].claire.is_identity());
    assert_eq!(table[1].alternatives, vec![(Gate::x(), Gate::z())]);

    let c = coeffs(C::new(0.28, 0.96 * 0.6), C::new(0.0, 0.96 * 0.8));
    let target = target_state(ProtocolKind::EprViaGhz, &c).unwrap();
    let report = expand_epr(&c, &MeasurementBasis::pi1_23_s4(0.0)).unwrap();
    for (rule, term) in table.iter().zip(&report.terms) {
        let mut pairs = vec![(rule.bob.clone(), rule.claire.clone())];
        pairs.extend(rule.alternatives.iter().cloned());
        for (bob, claire) in pairs {
            let fixed = term
                .residual
                .as_ref()
                .unwrap()
                .apply_gate(&bob.adjoint(), &[1])
                .unwrap()
                .apply_gate(&claire.adjoint(), &[2])
                .unwrap();
            assert!(
                (fixed.fidelity(&target).unwrap() - 1.0).abs() < TOL,
                "{}",
                rule.outcome
            );
        }
    }
}

#[test]
fn epr_examples() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let t = teleport_epr(
        &UnknownCoeffs::real(h, h).unwrap(),
        0.0,
        forced(1),
        RuleVariant::Main,
    )
    .unwrap();
    assert_eq!(t.operations.len(), 1);
    assert_eq!(
        (t.operations[0].party, t.operations[0].gate.as_str()),
        (PartyId::Bob, "X")
    );
    assert!((t.fidelity - 1.0).abs() < TOL);

    let c = UnknownCoeffs::real(0.6, 0.8).unwrap();
    let t = teleport_epr(&c, 0.0, forced(6), RuleVariant::Main).unwrap();
    assert_eq!(t.operations.len(), 1);
    assert_eq!(t.operations[0].party, PartyId::Claire);
    assert_eq!(t.operations[0].qubits, [5]);
    assert!((t.fidelity - 1.0).abs() < TOL);

    let main = teleport_epr(&c, 0.0, forced(2), RuleVariant::Main).unwrap();
    let alt = teleport_epr(&c, 0.0, forced(2), RuleVariant::Alternative).unwrap();
    let parties: Vec<PartyId> = alt.operations.iter().map(|o| o.party).collect();
    assert_eq!(parties, [PartyId::Bob, PartyId::Claire]);
    let rho = |s: &StateVector| ghz_teleport_core::DensityMatrix::from_pure(s);
    assert!(rho(&main.final_state).max_abs_diff(&rho(&alt.final_state)) < TOL);
}

#[test]
fn every_outcome_restores_the_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let c = UnknownCoeffs::haar(&mut rng);
        for phi in [0.0, 0.9, std::f64::consts::PI / 3.0] {
            for k in 1..=8 {
                let t = teleport_epr(&c, phi, forced(k), RuleVariant::Main).unwrap();
                assert!((t.fidelity - 1.0).abs() < TOL, "phi={phi} k={k}");
                assert!((t.probability - 0.125).abs() < TOL);
            }
        }
    }
}

#[test]
fn nplet_examples() {
    let c = UnknownCoeffs::real(0.6, 0.8).unwrap();
    for k in 1..=8 {
        let e = teleport_epr(&c, 0.0, forced(k), RuleVariant::Main).unwrap();
        let n = teleport_nplet(&c, 2, 0.0, forced(k)).unwrap();
        assert!((e.probability - n.probability).abs() < TOL);
        assert!((e.fidelity - n.fidelity).abs() < TOL);
    }
    let c = coeffs(C::new(0.6, 0.0), C::new(0.0, 0.8));
    for k in 1..=16 {
        let t = teleport_nplet(&c, 3, 0.0, forced(k)).unwrap();
        assert!((t.fidelity - 1.0).abs() < TOL);
        assert!((t.probability - 1.0 / 16.0).abs() < TOL);
    }
    assert!(teleport_nplet(&c, 1, 0.0, forced(1)).is_err());
    assert!(teleport_nplet(&c, 11, 0.0, forced(1)).is_err());
}

#[test]
fn seeded_runs_replay() {
    let c = UnknownCoeffs::real(0.6, 0.8).unwrap();
    for seed in [0, 1, 42, 9999] {
        let a = teleport_epr(&c, 0.3, OutcomeSelector::Seeded(seed), RuleVariant::Main).unwrap();
        let b = teleport_epr(&c, 0.3, OutcomeSelector::Seeded(seed), RuleVariant::Main).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn correction_verification() {
    let check = verify_corrections(ProtocolKind::EprViaGhz, 0.0, 10, 1).unwrap();
    assert!(check.passed() && check.outcomes == 8);
    let check =
        verify_corrections(ProtocolKind::EprViaGhz, std::f64::consts::PI / 3.0, 10, 2).unwrap();
    assert!(check.passed() && check.outcomes == 8);
    let check = verify_corrections(ProtocolKind::Nplet(5), 0.0, 5, 3).unwrap();
    assert!(check.passed() && check.outcomes == 64);
    assert!(check.min_fidelity > 1.0 - TOL);
    assert!(check.max_probability_error < TOL);
}

/// Reduced state of qubit 2 of a two-qubit pure state, by hand.
fn second_qubit_rho(s: &StateVector) -> [[C; 2]; 2] {
    let a = s.amps();
    let mut rho = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for first in 0..2 {
                rho[i][j] += a[first * 2 + i] * a[first * 2 + j].conj();
            }
        }
    }
    rho
}

#[test]
fn neither_receiver_alone() {
    let c = UnknownCoeffs::real(0.6, 0.8).unwrap();
    let target = target_state(ProtocolKind::EprViaGhz, &c).unwrap();
    let report = expand_epr(&c, &MeasurementBasis::pi1_23_s4(0.0)).unwrap();
    for (i, term) in report.terms.iter().enumerate() {
        let r = term.residual.as_ref().unwrap();
        assert!(r.fidelity(&target).unwrap() < 1.0 - 1e-3);
        if i < 4 {
            // Bob's outcomes: Claire's marginal is already right.
            let (got, want) = (second_qubit_rho(r), second_qubit_rho(&target));
            for (x, y) in got.iter().flatten().zip(want.iter().flatten()) {
                assert!((x - y).norm() < TOL);
            }
        } else {
            // Claire's outcomes: the best Bob can do alone is the squared
            // trace norm of Tr_2 |r><t|, which is 4|a|^2|b|^2 here.
            let best = best_single_qubit_fidelity(r, &target, 1).unwrap();
            assert!(
                (best - 4.0 * 0.36 * 0.64).abs() < 1e-6,
                "k={} best={best}",
                i + 1
            );
            assert!(best < 1.0 - 1e-3);
        }
    }
}

#[test]
fn outcome_table_matches_forced_runs() {
    let c = coeffs(C::new(0.6, 0.0), C::new(0.0, 0.8));
    for (kind, phi) in [
        (ProtocolKind::Single, 0.0),
        (ProtocolKind::EprViaGhz, 0.0),
        (ProtocolKind::EprViaGhz, 0.7),
        (ProtocolKind::Nplet(3), 0.0),
        (ProtocolKind::Nplet(4), 1.1),
    ] {
        let protocol = Protocol::new(kind, phi).unwrap();
        for variant in [RuleVariant::Main, RuleVariant::Alternative] {
            let table = protocol.outcome_table(&c, variant).unwrap();
            assert_eq!(table.len(), protocol.basis().len());
            for row in &table {
                let t = protocol
                    .run(&c, OutcomeSelector::Forced(row.outcome), variant)
                    .unwrap();
                assert!((t.probability - row.probability).abs() < TOL);
                assert!((t.fidelity - row.fidelity).abs() < TOL);
                let gates: Vec<&str> = row.plan.iter().map(|op| op.gate.label()).collect();
                let applied: Vec<&str> = t.operations.iter().map(|op| op.gate.as_str()).collect();
                assert_eq!(gates, applied, "{kind:?} phi={phi} {}", row.outcome);
            }
        }
    }
}
