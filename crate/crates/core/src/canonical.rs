//! Constructors for the named states of the protocol.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::protocol::UnknownCoeffs;
use crate::state::{check_register, StateVector};

const S: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// The four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    /// Amplitudes on `|00>, |01>, |10>, |11>`.
    pub fn amplitudes(self) -> [f64; 4] {
        match self {
            BellKind::PhiPlus => [S, 0.0, 0.0, S],
            BellKind::PhiMinus => [S, 0.0, 0.0, -S],
            BellKind::PsiPlus => [0.0, S, S, 0.0],
            BellKind::PsiMinus => [0.0, S, -S, 0.0],
        }
    }

    pub fn is_phi(self) -> bool {
        matches!(self, BellKind::PhiPlus | BellKind::PhiMinus)
    }

    pub fn from_parts(phi_type: bool, minus: bool) -> Self {
        match (phi_type, minus) {
            (true, false) => BellKind::PhiPlus,
            (true, true) => BellKind::PhiMinus,
            (false, false) => BellKind::PsiPlus,
            (false, true) => BellKind::PsiMinus,
        }
    }
}

/// Which two-qubit form carries the unknown coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EprForm {
    /// `alpha|00> + beta|11>`
    Diagonal,
    /// `alpha|01> + beta|10>`
    AntiDiagonal,
}

impl EprForm {
    /// Computational indices that carry `alpha` and `beta`.
    pub fn support(self) -> (usize, usize) {
        match self {
            EprForm::Diagonal => (0b00, 0b11),
            EprForm::AntiDiagonal => (0b01, 0b10),
        }
    }
}

pub fn bell(kind: BellKind) -> StateVector {
    let amps = kind
        .amplitudes()
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    StateVector::from_normalized(2, amps)
}

/// `alpha|00> + beta|11>` or `alpha|01> + beta|10>`.
pub fn epr_input(coeffs: &UnknownCoeffs, form: EprForm) -> StateVector {
    let (a, b) = form.support();
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    amps[a] = coeffs.alpha();
    amps[b] = coeffs.beta();
    StateVector::from_normalized(2, amps)
}

/// `(|000> + |111>)/sqrt 2`.
pub fn ghz_triplet() -> StateVector {
    ghz_chain(3).expect("three qubits is a valid chain")
}

/// The eight maximally entangled three-qubit states, listed as
/// `000 +- 111`, `001 +- 110`, `010 +- 101`, `100 +- 011`.
pub fn triplet_mes_family() -> Vec<StateVector> {
    let pairs = [
        (0b000, 0b111),
        (0b001, 0b110),
        (0b010, 0b101),
        (0b100, 0b011),
    ];
    let mut out = Vec::with_capacity(8);
    for (a, b) in pairs {
        for sign in [1.0, -1.0] {
            let mut amps = vec![Complex64::new(0.0, 0.0); 8];
            amps[a] = Complex64::new(S, 0.0);
            amps[b] = Complex64::new(sign * S, 0.0);
            out.push(StateVector::from_normalized(3, amps));
        }
    }
    out
}

/// `alpha|0...0> + beta|1...1>` on `n >= 1` qubits.
pub fn nplet(coeffs: &UnknownCoeffs, n: usize) -> Result<StateVector> {
    check_register(n)?;
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = coeffs.alpha();
    amps[dim - 1] = coeffs.beta();
    Ok(StateVector::from_normalized(n, amps))
}

/// `(|0...0> + |1...1>)/sqrt 2` on `m >= 2` qubits.
pub fn ghz_chain(m: usize) -> Result<StateVector> {
    if m < 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "a GHZ chain needs at least 2 qubits, got {m}"
        )));
    }
    check_register(m)?;
    let dim = 1usize << m;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(S, 0.0);
    amps[dim - 1] = Complex64::new(S, 0.0);
    Ok(StateVector::from_normalized(m, amps))
}

/// `(|0> +- e^{i phi}|1>)/sqrt 2`.
pub fn pi_state(phi: f64, minus: bool) -> StateVector {
    let sign = if minus { -S } else { S };
    StateVector::from_normalized(
        1,
        vec![Complex64::new(S, 0.0), Complex64::from_polar(sign, phi)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bell_amplitudes() {
        assert_eq!(
            bell(BellKind::PhiPlus).amps(),
            &[c(S), c(0.0), c(0.0), c(S)]
        );
        assert_eq!(
            bell(BellKind::PsiMinus).amps(),
            &[c(0.0), c(S), c(-S), c(0.0)]
        );
        for (i, a) in BellKind::ALL.iter().enumerate() {
            for (j, b) in BellKind::ALL.iter().enumerate() {
                let ov = bell(*a).inner(&bell(*b)).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ov - c(want)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn epr_inputs() {
        let one_zero = UnknownCoeffs::real(1.0, 0.0).unwrap();
        assert_eq!(
            epr_input(&one_zero, EprForm::AntiDiagonal),
            StateVector::from_bits("01").unwrap()
        );
        let even = UnknownCoeffs::real(S, S).unwrap();
        let psi = epr_input(&even, EprForm::AntiDiagonal);
        assert!((psi.fidelity(&bell(BellKind::PsiPlus)).unwrap() - 1.0).abs() < 1e-15);
        let d = epr_input(&UnknownCoeffs::real(0.6, 0.8).unwrap(), EprForm::Diagonal);
        assert_eq!(d.amps(), &[c(0.6), c(0.0), c(0.0), c(0.8)]);
    }

    #[test]
    fn triplet_family_order_and_gram() {
        let fam = triplet_mes_family();
        assert_eq!(fam.len(), 8);
        let third = &fam[2];
        assert!((third.amplitude(0b001) - c(S)).norm() < 1e-15);
        assert!((third.amplitude(0b110) - c(S)).norm() < 1e-15);
        assert_eq!(fam[0], ghz_triplet());
        for (i, a) in fam.iter().enumerate() {
            for (j, b) in fam.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b).unwrap() - c(want)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn nplets_and_chains() {
        let coeffs =
            UnknownCoeffs::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        assert_eq!(
            nplet(&coeffs, 2).unwrap(),
            epr_input(&coeffs, EprForm::Diagonal)
        );
        assert_eq!(ghz_chain(3).unwrap(), ghz_triplet());
        let even = UnknownCoeffs::real(S, S).unwrap();
        let four = nplet(&even, 4).unwrap();
        assert_eq!(four.support_size(1e-12), 2);
        assert!((four.amplitude(0) - c(S)).norm() < 1e-15);
        assert!((four.amplitude(15) - c(S)).norm() < 1e-15);
        assert!(ghz_chain(1).is_err());
        assert!(nplet(&even, 0).is_err());
        assert!(nplet(&even, 25).is_err());
    }
}
