//! Schmidt spectra and the three-qubit entanglement classes.

use alloc::vec::Vec;
// Only needed without std; with std linked the inherent f64 methods win.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::RANK_TOLERANCE;

/// Entanglement structure of a pure three-qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntanglementClass {
    Product,
    /// Exactly one pair `(i, j)`, `i < j`, is entangled; the third qubit
    /// factors out.
    PairEntangled(usize, usize),
    GenuineTripartite,
}

/// Nonzero Schmidt coefficients across `left | rest`, in descending order.
///
/// Computed as square roots of the eigenvalues of the reduced density
/// matrix of the `left` qubits; values at or below [`RANK_TOLERANCE`] are
/// dropped.
pub fn schmidt(state: &StateVector, left: &[usize]) -> Result<Vec<f64>> {
    if left.is_empty() || left.len() >= state.n_qubits() {
        return Err(Error::DegeneratePartition);
    }
    let rho = state.reduce(left)?;
    let mut values: Vec<f64> = rho
        .eigenvalues()?
        .into_iter()
        .map(|e| e.max(0.0).sqrt())
        .filter(|&v| v > RANK_TOLERANCE)
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Number of Schmidt coefficients above [`RANK_TOLERANCE`].
pub fn schmidt_rank(state: &StateVector, left: &[usize]) -> Result<usize> {
    Ok(schmidt(state, left)?.len())
}

/// Schmidt spectrum equal to `[1/sqrt 2, 1/sqrt 2]` within [`RANK_TOLERANCE`].
pub fn is_maximally_entangled_pair(state: &StateVector, left: &[usize]) -> Result<bool> {
    let s = schmidt(state, left)?;
    let h = core::f64::consts::FRAC_1_SQRT_2;
    Ok(s.len() == 2 && s.iter().all(|v| (v - h).abs() <= RANK_TOLERANCE))
}

pub fn classify3(state: &StateVector) -> Result<EntanglementClass> {
    if state.n_qubits() != 3 {
        return Err(Error::WrongQubitCount {
            expected: 3,
            found: state.n_qubits(),
        });
    }
    let ranks = [
        schmidt_rank(state, &[1])?,
        schmidt_rank(state, &[2])?,
        schmidt_rank(state, &[3])?,
    ];
    if ranks.iter().all(|&r| r == 1) {
        return Ok(EntanglementClass::Product);
    }
    for (k, pair) in [(0, (2, 3)), (1, (1, 3)), (2, (1, 2))] {
        // The pair is entangled once the third qubit factors out and at
        // least one bipartition is not rank one.
        if ranks[k] == 1 {
            return Ok(EntanglementClass::PairEntangled(pair.0, pair.1));
        }
    }
    Ok(EntanglementClass::GenuineTripartite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{bell, ghz_triplet, nplet, triplet_mes_family, BellKind};
    use crate::protocol::UnknownCoeffs;

    const H: f64 = core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn schmidt_examples() {
        let prod = StateVector::from_bits("01").unwrap();
        let s = schmidt(&prod, &[1]).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 1.0).abs() < 1e-12);

        let s = schmidt(&bell(BellKind::PhiPlus), &[1]).unwrap();
        assert!((s[0] - H).abs() < 1e-12 && (s[1] - H).abs() < 1e-12);

        let s = schmidt(&ghz_triplet(), &[1, 2]).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s[0] - H).abs() < 1e-12 && (s[1] - H).abs() < 1e-12);

        assert_eq!(
            schmidt(&ghz_triplet(), &[]),
            Err(Error::DegeneratePartition)
        );
        assert_eq!(
            schmidt(&ghz_triplet(), &[1, 2, 3]),
            Err(Error::DegeneratePartition)
        );
    }

    #[test]
    fn classify_examples() {
        let p = StateVector::from_bits("010").unwrap();
        assert_eq!(classify3(&p).unwrap(), EntanglementClass::Product);
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
        assert!(classify3(&bell(BellKind::PhiPlus)).is_err());
    }

    #[test]
    fn triplet_family_is_genuinely_tripartite() {
        for v in triplet_mes_family() {
            assert_eq!(classify3(&v).unwrap(), EntanglementClass::GenuineTripartite);
            for q in 1..=3 {
                assert!(is_maximally_entangled_pair(&v, &[q]).unwrap());
            }
        }
    }

    #[test]
    fn nplet_spectrum_matches_coefficients() {
        let coeffs = UnknownCoeffs::real(0.6, 0.8).unwrap();
        let s4 = nplet(&coeffs, 4).unwrap();
        for left in [&[1][..], &[1, 2], &[2, 4], &[1, 2, 3]] {
            let s = schmidt(&s4, left).unwrap();
            assert!(
                (s[0] - 0.8).abs() < 1e-12 && (s[1] - 0.6).abs() < 1e-12,
                "{s:?}"
            );
        }
    }
}
