use ghz_teleport_core::basis::MeasurementBasis;
use ghz_teleport_core::canonical::{
    bell, epr_input, ghz_chain, ghz_triplet, nplet, triplet_mes_family, BellKind, EprForm,
};
use ghz_teleport_core::entanglement::{classify3, schmidt, EntanglementClass};
use ghz_teleport_core::measure::measure;
use ghz_teleport_core::{Error, Gate, Outcome, OutcomeSelector, StateVector, UnknownCoeffs};
use num_complex::Complex64 as C;

const TOL: f64 = 1e-12;
const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn real(n: usize, amps: &[f64]) -> StateVector {
    StateVector::from_real(n, amps).unwrap()
}

fn assert_amps(state: &StateVector, expected: &[f64]) {
    assert_eq!(state.dim(), expected.len());
    for (a, e) in state.amps().iter().zip(expected) {
        assert!(
            (a - C::new(*e, 0.0)).norm() < TOL,
            "{:?} vs {expected:?}",
            state.amps()
        );
    }
}

#[test]
fn construction_normalizes() {
    assert_amps(&real(1, &[1.0, 0.0]), &[1.0, 0.0]);
    assert_amps(&real(2, &[0.0, 1.0, 1.0, 0.0]), &[0.0, S, S, 0.0]);
    let ghz = real(3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    assert_amps(&ghz, &[S, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, S]);
    assert_eq!(
        StateVector::from_real(2, &[0.0; 4]).unwrap_err(),
        Error::ZeroVector
    );
    assert!(matches!(
        StateVector::from_real(2, &[1.0; 3]),
        Err(Error::LengthMismatch { .. })
    ));
}

#[test]
fn tensor_products() {
    let s = real(1, &[1.0, 0.0]).tensor(&real(1, &[0.0, 1.0])).unwrap();
    assert_eq!(s, StateVector::from_bits("01").unwrap());

    let big = bell(BellKind::PsiPlus).tensor(&ghz_triplet()).unwrap();
    assert_eq!(big.n_qubits(), 5);
    let nonzero: Vec<usize> = (0..32).filter(|&i| big.amplitude(i).norm() > TOL).collect();
    assert_eq!(nonzero, [0b01000, 0b01111, 0b10000, 0b10111]);
    for i in nonzero {
        assert!((big.amplitude(i) - C::new(0.5, 0.0)).norm() < TOL);
    }

    let c = UnknownCoeffs::real(1.0, 0.0).unwrap();
    let s = epr_input(&c, EprForm::AntiDiagonal)
        .tensor(&ghz_triplet())
        .unwrap();
    assert_eq!(s.support_size(TOL), 2);
}

#[test]
fn gates() {
    let one = StateVector::from_bits("1").unwrap();
    let zero = StateVector::from_bits("0").unwrap();
    assert_eq!(zero.apply_gate(&Gate::x(), &[1]).unwrap(), one);
    assert_amps(&zero.apply_gate(&Gate::h(), &[1]).unwrap(), &[S, S]);
    let plus0 = real(2, &[1.0, 0.0, 1.0, 0.0]);
    assert_amps(
        &plus0.apply_gate(&Gate::cnot(), &[1, 2]).unwrap(),
        &[S, 0.0, 0.0, S],
    );
    assert!(matches!(
        zero.apply_gate(&Gate::cnot(), &[1]),
        Err(Error::ArityMismatch { .. })
    ));
    assert!(matches!(
        plus0.apply_gate(&Gate::x(), &[3]),
        Err(Error::QubitOutOfRange { .. })
    ));
    assert_eq!(
        plus0.apply_gate(&Gate::cnot(), &[2, 2]).unwrap_err(),
        Error::DuplicateQubit(2)
    );
}

#[test]
fn inner_products_and_fidelity() {
    let zero = StateVector::from_bits("0").unwrap();
    let one = StateVector::from_bits("1").unwrap();
    let plus = real(1, &[1.0, 1.0]);
    assert!((zero.inner(&zero).unwrap() - 1.0).norm() < TOL);
    assert!(zero.inner(&one).unwrap().norm() < TOL);
    assert!((plus.inner(&one).unwrap() - S).norm() < TOL);

    let psi = StateVector::new(1, vec![C::new(0.6, 0.0), C::new(0.0, 0.8)]).unwrap();
    let phase = C::from_polar(1.0, 0.731);
    let rotated = StateVector::new(1, psi.amps().iter().map(|a| a * phase).collect()).unwrap();
    assert!((psi.fidelity(&psi).unwrap() - 1.0).abs() < TOL);
    assert!(zero.fidelity(&one).unwrap().abs() < TOL);
    assert!((psi.fidelity(&rotated).unwrap() - 1.0).abs() < TOL);
}

#[test]
fn projections() {
    let s = StateVector::from_bits("01").unwrap();
    let r = s
        .project(&StateVector::from_bits("0").unwrap(), &[1])
        .unwrap();
    assert!((r.probability() - 1.0).abs() < TOL);
    assert_eq!(
        r.normalize().unwrap().0,
        StateVector::from_bits("1").unwrap()
    );

    // four of the eight triplet projections of (|01>+|10>)/sqrt2 (x) GHZ vanish
    let state = bell(BellKind::PsiPlus).tensor(&ghz_triplet()).unwrap();
    let zero = triplet_mes_family()
        .iter()
        .filter(|v| state.project(v, &[1, 2, 3]).unwrap().is_zero(1e-10))
        .count();
    assert_eq!(zero, 4);
}

#[test]
fn bell_measurement() {
    let phi_plus = bell(BellKind::PhiPlus);
    let m = measure(
        &phi_plus,
        &MeasurementBasis::bell(),
        &[1, 2],
        OutcomeSelector::Forced(Outcome::from_k(1)),
    )
    .unwrap();
    assert!((m.probability - 1.0).abs() < TOL);
    assert!(m.post_state.is_none());
    assert_eq!(
        measure(
            &phi_plus,
            &MeasurementBasis::bell(),
            &[1, 2],
            OutcomeSelector::Forced(Outcome::from_k(3)),
        )
        .unwrap_err(),
        Error::ZeroProbabilityOutcome { k: 3 }
    );
}

#[test]
fn partial_traces() {
    let rho = StateVector::from_bits("01").unwrap().reduce(&[1]).unwrap();
    assert!((rho.entries()[(0, 0)] - 1.0).norm() < TOL);
    assert!(rho.entries()[(1, 1)].norm() < TOL);

    let rho = bell(BellKind::PhiPlus).reduce(&[1]).unwrap();
    let half = ghz_teleport_core::CMatrix::identity(2).scale(C::new(0.5, 0.0));
    assert!(rho.entries().max_abs_diff(&half) < TOL);

    let rho = ghz_triplet().reduce(&[1, 2]).unwrap();
    for r in 0..4 {
        for c in 0..4 {
            let expected = if r == c && (r == 0 || r == 3) {
                0.5
            } else {
                0.0
            };
            assert!((rho.entries()[(r, c)] - expected).norm() < TOL);
        }
    }
}

#[test]
fn named_states() {
    assert_amps(&bell(BellKind::PhiPlus), &[S, 0.0, 0.0, S]);
    assert_amps(&bell(BellKind::PsiMinus), &[0.0, S, -S, 0.0]);

    let c = UnknownCoeffs::real(1.0, 0.0).unwrap();
    assert_eq!(
        epr_input(&c, EprForm::AntiDiagonal),
        StateVector::from_bits("01").unwrap()
    );
    let c = UnknownCoeffs::real(S, S).unwrap();
    assert_amps(&epr_input(&c, EprForm::AntiDiagonal), &[0.0, S, S, 0.0]);
    let c = UnknownCoeffs::real(0.6, 0.8).unwrap();
    assert_amps(&epr_input(&c, EprForm::Diagonal), &[0.6, 0.0, 0.0, 0.8]);

    assert_amps(&ghz_triplet(), &[S, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, S]);
    assert_amps(
        &triplet_mes_family()[2],
        &[0.0, S, 0.0, 0.0, 0.0, 0.0, S, 0.0],
    );

    let c = UnknownCoeffs::real(S, S).unwrap();
    let four = nplet(&c, 4).unwrap();
    let mut expected = [0.0; 16];
    expected[0] = S;
    expected[15] = S;
    assert_amps(&four, &expected);
    assert_eq!(ghz_chain(4).unwrap(), four);
}

#[test]
fn schmidt_and_classification() {
    let s = schmidt(&StateVector::from_bits("01").unwrap(), &[1]).unwrap();
    assert_eq!(s.len(), 1);
    assert!((s[0] - 1.0).abs() < TOL);
    let s = schmidt(&bell(BellKind::PhiPlus), &[1]).unwrap();
    assert!(s.iter().all(|x| (x - S).abs() < 1e-9));
    let s = schmidt(&ghz_triplet(), &[1, 2]).unwrap();
    assert!(s.iter().all(|x| (x - S).abs() < 1e-9));
    assert_eq!(
        schmidt(&ghz_triplet(), &[]).unwrap_err(),
        Error::DegeneratePartition
    );

    assert_eq!(
        classify3(&StateVector::from_bits("010").unwrap()).unwrap(),
        EntanglementClass::Product
    );
    let pair = StateVector::from_bits("0")
        .unwrap()
        .tensor(&bell(BellKind::PhiPlus))
        .unwrap();
    assert_eq!(
        classify3(&pair).unwrap(),
        EntanglementClass::PairEntangled(2, 3)
    );
    assert_eq!(
        classify3(&ghz_triplet()).unwrap(),
        EntanglementClass::GenuineTripartite
    );
}
