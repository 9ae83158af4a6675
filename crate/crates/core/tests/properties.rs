use ghz_teleport_core::adequacy::{adequacy, InputForm};
use ghz_teleport_core::basis::MeasurementBasis;
use ghz_teleport_core::canonical::EprForm;
use ghz_teleport_core::measure::measure;
use ghz_teleport_core::protocol::teleport_epr;
use ghz_teleport_core::{Gate, Outcome, OutcomeSelector, RuleVariant, StateVector, UnknownCoeffs};
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(move |v| {
            StateVector::new(n, v.into_iter().map(|(a, b)| C::new(a, b)).collect()).unwrap()
        })
}

fn coeffs() -> impl Strategy<Value = UnknownCoeffs> {
    (
        0.0f64..std::f64::consts::FRAC_PI_2,
        0.0f64..6.3,
        0.0f64..6.3,
    )
        .prop_map(|(t, pa, pb)| {
            UnknownCoeffs::new(C::from_polar(t.cos(), pa), C::from_polar(t.sin(), pb)).unwrap()
        })
}

fn named_gate() -> impl Strategy<Value = Gate> {
    prop::sample::select(vec!["X", "Y", "Z", "H", "iY", "-iY", "-X"])
        .prop_map(|n| Gate::by_name(n).unwrap())
}

proptest! {
    #[test]
    fn gates_preserve_norm(s in state(3), g in named_gate(), q in 1usize..=3) {
        let out = s.apply_gate(&g, &[q]).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gate_then_adjoint_is_identity(s in state(3), g in named_gate(), q in 1usize..=3) {
        let back = s.apply_gate(&g, &[q]).unwrap().apply_gate(&g.adjoint(), &[q]).unwrap();
        prop_assert!(back.phase_aligned_distance(&s).unwrap() < 1e-12);
        let c = s.apply_gate(&Gate::cnot(), &[q, q % 3 + 1]).unwrap()
            .apply_gate(&Gate::cnot(), &[q, q % 3 + 1]).unwrap();
        prop_assert!(c.phase_aligned_distance(&s).unwrap() < 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one(s in state(4), phi in 0.0f64..6.3) {
        let m = measure(&s, &MeasurementBasis::pi1_23_s4(phi), &[2, 3, 4], OutcomeSelector::Seeded(0)).unwrap();
        prop_assert!((m.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_factorizes_products(a in state(2), b in state(1)) {
        let joint = a.tensor(&b).unwrap();
        let left = joint.reduce(&[1, 2]).unwrap();
        let right = joint.reduce(&[3]).unwrap();
        let pa = ghz_teleport_core::DensityMatrix::from_pure(&a);
        let pb = ghz_teleport_core::DensityMatrix::from_pure(&b);
        prop_assert!(left.max_abs_diff(&pa) < 1e-12);
        prop_assert!(right.max_abs_diff(&pb) < 1e-12);
    }

    #[test]
    fn outcome_maps_are_linear(c in coeffs(), phi in 0.0f64..6.3) {
        // M_k (a, b) must equal the projection of the input built from (a, b)
        let report = adequacy(&MeasurementBasis::pi1_23_s4(phi), InputForm::Epr(EprForm::AntiDiagonal), 3).unwrap();
        let input = InputForm::Epr(EprForm::AntiDiagonal).state(&c).unwrap()
            .tensor(&ghz_teleport_core::canonical::ghz_triplet()).unwrap();
        for (map, v) in report.maps.iter().zip(MeasurementBasis::pi1_23_s4(phi).vectors()) {
            let direct = input.project(v, &[1, 2, 3]).unwrap();
            for (x, y) in map.apply(&c).iter().zip(direct.amps()) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn teleportation_is_exact(c in coeffs(), phi in 0.0f64..6.3, k in 1usize..=8) {
        let t = teleport_epr(&c, phi, OutcomeSelector::Forced(Outcome::from_k(k)), RuleVariant::Main).unwrap();
        prop_assert!((t.fidelity - 1.0).abs() < 1e-10);
        prop_assert!((t.probability - 0.125).abs() < 1e-10);
    }
}
