//! Joint-measurement basis families and their `s`-parameter classification.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::canonical::{triplet_mes_family, BellKind};
use crate::entanglement::{classify3, EntanglementClass};
use crate::error::{Error, Result};
use crate::state::{Amplitude, StateVector};
use crate::TOLERANCE;

/// Largest register a [`MeasurementBasis::general`] basis may span.
pub const MAX_BASIS_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisFamily {
    /// Product states `|ijk>`.
    Pi123,
    /// `|i>` times a Bell state on qubits 2,3.
    Pi1_23S2,
    /// `|pi+->` on qubit 1 times a Bell state on qubits 2,3.
    Pi1_23S4,
    /// Bell state on qubits 1,3 with `|pi+->` on qubit 2.
    Pi13_2S4,
    /// The eight maximally entangled three-qubit states.
    TripletMes,
    /// `|pi+->` on qubits `1..n-1`, Bell state on `(n, n+1)`.
    General {
        n: usize,
    },
    /// Two-qubit Bell basis.
    Bell,
    Custom,
}

impl BasisFamily {
    pub fn tag(self) -> &'static str {
        match self {
            BasisFamily::Pi123 => "pi123",
            BasisFamily::Pi1_23S2 => "pi1-23-s2",
            BasisFamily::Pi1_23S4 => "pi1-23-s4",
            BasisFamily::Pi13_2S4 => "pi13-2-s4",
            BasisFamily::TripletMes => "ghz-triplet",
            BasisFamily::General { .. } => "general",
            BasisFamily::Bell => "bell",
            BasisFamily::Custom => "custom",
        }
    }
}

/// Complete orthonormal family of `2^m` vectors on `m` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    m_qubits: usize,
    vectors: Vec<StateVector>,
    labels: Vec<String>,
    family: BasisFamily,
    phi: Option<f64>,
}

/// Common number of nonzero computational amplitudes across a basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SParameter {
    Defined(usize),
    Undefined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisClassification {
    pub s: SParameter,
    /// Present for three-qubit bases only.
    pub per_vector_class: Option<Vec<EntanglementClass>>,
    /// Number of vectors in which exactly one pair is entangled.
    pub entangled_pair_count: usize,
}

/// Overlaps of a string vector with `|0...0>` and `|1...1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PqValues {
    pub p: Amplitude,
    pub q: Amplitude,
    /// Both overlaps exceed [`TOLERANCE`] in modulus.
    pub condition_holds: bool,
}

const S: f64 = core::f64::consts::FRAC_1_SQRT_2;

fn pi_amplitude(bit: usize, minus: bool, phi: f64) -> Amplitude {
    if bit == 0 {
        Complex64::new(S, 0.0)
    } else {
        Complex64::from_polar(if minus { -S } else { S }, phi)
    }
}

fn sign(minus: bool) -> char {
    if minus {
        '-'
    } else {
        '+'
    }
}

fn bell_name(kind: BellKind) -> &'static str {
    match kind {
        BellKind::PhiPlus => "Phi+",
        BellKind::PhiMinus => "Phi-",
        BellKind::PsiPlus => "Psi+",
        BellKind::PsiMinus => "Psi-",
    }
}

impl MeasurementBasis {
    /// Validates completeness and orthonormality.
    pub fn new(
        family: BasisFamily,
        phi: Option<f64>,
        vectors: Vec<StateVector>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let m_qubits = vectors.first().map_or(0, StateVector::n_qubits);
        let expected = 1usize << m_qubits;
        if m_qubits == 0 || vectors.len() != expected {
            return Err(Error::IncompleteBasis {
                m_qubits,
                expected,
                found: vectors.len(),
            });
        }
        if vectors.iter().any(|v| v.n_qubits() != m_qubits) {
            return Err(Error::NonOrthonormalBasis);
        }
        if labels.len() != vectors.len() {
            return Err(Error::LengthMismatch {
                expected: vectors.len(),
                found: labels.len(),
            });
        }
        let basis = Self {
            m_qubits,
            vectors,
            labels,
            family,
            phi,
        };
        if basis.gram_deviation() > TOLERANCE {
            return Err(Error::NonOrthonormalBasis);
        }
        Ok(basis)
    }

    /// For families that are orthonormal by construction.
    fn trusted(
        family: BasisFamily,
        phi: Option<f64>,
        m_qubits: usize,
        vectors: Vec<StateVector>,
        labels: Vec<String>,
    ) -> Self {
        debug_assert_eq!(vectors.len(), 1 << m_qubits);
        Self {
            m_qubits,
            vectors,
            labels,
            family,
            phi,
        }
    }

    /// Custom basis with generated labels `v1, v2, ...`.
    pub fn custom(vectors: Vec<StateVector>) -> Result<Self> {
        let labels = (1..=vectors.len()).map(|i| format!("v{i}")).collect();
        Self::new(BasisFamily::Custom, None, vectors, labels)
    }

    /// Product basis `|ijk>` in order `|000>..|111>`.
    pub fn pi123() -> Self {
        let vectors = (0..8)
            .map(|i| StateVector::basis_state(3, i).expect("3 qubits"))
            .collect();
        let labels = (0..8).map(|i| format!("|{i:03b}>")).collect();
        Self::trusted(BasisFamily::Pi123, None, 3, vectors, labels)
    }

    /// `|i>|Bell_23>`: `i` ascending, then `Phi+, Phi-, Psi+, Psi-`.
    pub fn pi1_23_s2() -> Self {
        let mut vectors = Vec::with_capacity(8);
        let mut labels = Vec::with_capacity(8);
        for i in 0..2usize {
            for kind in BellKind::ALL {
                let bell = kind.amplitudes();
                let mut amps = vec![Complex64::new(0.0, 0.0); 8];
                for (b, a) in bell.iter().enumerate() {
                    amps[(i << 2) | b] = Complex64::new(*a, 0.0);
                }
                vectors.push(StateVector::from_normalized(3, amps));
                labels.push(format!("|{i}> {}(23)", bell_name(kind)));
            }
        }
        Self::trusted(BasisFamily::Pi1_23S2, None, 3, vectors, labels)
    }

    /// `|pi1+->|Bell_23>` in the order of the outcome list `k = 1..8`:
    /// the Phi outcomes first, then Psi; within each, `pi+` before `pi-`,
    /// and `+` before `-` on the Bell sign.
    pub fn pi1_23_s4(phi: f64) -> Self {
        let mut basis = Self::general(2, phi).expect("N = 2 is in range");
        basis.family = BasisFamily::Pi1_23S4;
        basis
    }

    /// Bell state on qubits 1,3 with `|pi2+->` on qubit 2, same ordering
    /// convention as [`MeasurementBasis::pi1_23_s4`].
    pub fn pi13_2_s4(phi: f64) -> Self {
        let mut vectors = Vec::with_capacity(8);
        let mut labels = Vec::with_capacity(8);
        for phi_type in [true, false] {
            for pi_minus in [false, true] {
                for bell_minus in [false, true] {
                    let kind = BellKind::from_parts(phi_type, bell_minus);
                    let bell = kind.amplitudes();
                    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
                    for q1 in 0..2usize {
                        for q3 in 0..2usize {
                            let b = bell[(q1 << 1) | q3];
                            if b == 0.0 {
                                continue;
                            }
                            for q2 in 0..2usize {
                                amps[(q1 << 2) | (q2 << 1) | q3] =
                                    pi_amplitude(q2, pi_minus, phi) * b;
                            }
                        }
                    }
                    vectors.push(StateVector::from_normalized(3, amps));
                    labels.push(format!("{}(13) pi{}(2)", bell_name(kind), sign(pi_minus)));
                }
            }
        }
        Self::trusted(BasisFamily::Pi13_2S4, Some(phi), 3, vectors, labels)
    }

    /// The maximally entangled triplet family used as a measurement basis.
    pub fn triplet_mes() -> Self {
        let labels = ["000", "001", "010", "100"]
            .iter()
            .flat_map(|a| {
                let b: String = a
                    .chars()
                    .map(|c| if c == '0' { '1' } else { '0' })
                    .collect();
                [format!("|{a}>+|{b}>"), format!("|{a}>-|{b}>")]
            })
            .collect();
        Self::trusted(
            BasisFamily::TripletMes,
            None,
            3,
            triplet_mes_family(),
            labels,
        )
    }

    /// Two-qubit Bell basis in the order `Phi+, Phi-, Psi+, Psi-`.
    pub fn bell() -> Self {
        let vectors = BellKind::ALL
            .iter()
            .map(|&k| crate::canonical::bell(k))
            .collect();
        let labels = BellKind::ALL
            .iter()
            .map(|&k| String::from(bell_name(k)))
            .collect();
        Self::trusted(BasisFamily::Bell, None, 2, vectors, labels)
    }

    /// `|pi+->^(n-1) (x) Bell_(n, n+1)` on qubits `1..=n+1`.
    ///
    /// Outcome index = `bell_type * 2^n + pi_string * 2 + bell_sign`, where
    /// `bell_type` is 0 for Phi and 1 for Psi, and `pi_string` reads the
    /// `+-` choices of qubits `1..n-1` as binary with `+ = 0`, qubit 1 most
    /// significant. For `n = 2` this is the `k = 1..8` outcome order.
    pub fn general(n: usize, phi: f64) -> Result<Self> {
        check_general(n)?;
        let count = 1usize << (n + 1);
        let mut vectors = Vec::with_capacity(count);
        let mut labels = Vec::with_capacity(count);
        for index in 0..count {
            let (v, label) = general_element(n, phi, index)?;
            vectors.push(v);
            labels.push(label);
        }
        Ok(Self::trusted(
            BasisFamily::General { n },
            Some(phi),
            n + 1,
            vectors,
            labels,
        ))
    }

    pub fn m_qubits(&self) -> usize {
        self.m_qubits
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn vector(&self, index: usize) -> &StateVector {
        &self.vectors[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn phi(&self) -> Option<f64> {
        self.phi
    }

    /// `max |<v_i|v_j> - delta_ij|` over all pairs.
    pub fn gram_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate().skip(i) {
                let ov = a.inner(b).unwrap_or(Complex64::new(f64::INFINITY, 0.0));
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ov - Complex64::new(want, 0.0)).norm());
            }
        }
        worst
    }

    pub fn classify(&self) -> BasisClassification {
        let counts: Vec<usize> = self
            .vectors
            .iter()
            .map(|v| v.support_size(TOLERANCE))
            .collect();
        let s = match counts.first() {
            Some(&first) if counts.iter().all(|&c| c == first) => SParameter::Defined(first),
            _ => SParameter::Undefined,
        };
        let per_vector_class = if self.m_qubits == 3 {
            self.vectors
                .iter()
                .map(classify3)
                .collect::<Result<Vec<_>>>()
                .ok()
        } else {
            None
        };
        let entangled_pair_count = per_vector_class.as_ref().map_or(0, |classes| {
            classes
                .iter()
                .filter(|c| matches!(c, EntanglementClass::PairEntangled(..)))
                .count()
        });
        BasisClassification {
            s,
            per_vector_class,
            entangled_pair_count,
        }
    }
}

fn check_general(n: usize) -> Result<()> {
    if n < 2 || n + 1 > MAX_BASIS_QUBITS {
        return Err(Error::InvalidParameter(format!(
            "general basis needs 2 <= N <= {}, got {n}",
            MAX_BASIS_QUBITS - 1
        )));
    }
    Ok(())
}

/// Element `index` of [`MeasurementBasis::general`] and its label, built on
/// its own.
pub fn general_element(n: usize, phi: f64, index: usize) -> Result<(StateVector, String)> {
    check_general(n)?;
    let m = n + 1;
    if index >= 1 << m {
        return Err(Error::OutcomeOutOfRange {
            k: index + 1,
            count: 1 << m,
        });
    }
    let strings = 1usize << (n - 1);
    let phi_type = index >> n == 0;
    let pi_string = (index >> 1) & (strings - 1);
    let kind = BellKind::from_parts(phi_type, index & 1 == 1);
    let bell = kind.amplitudes();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << m];
    for bits in 0..strings {
        let mut amp = Complex64::new(1.0, 0.0);
        for j in 0..(n - 1) {
            let shift = n - 2 - j;
            let minus = (pi_string >> shift) & 1 == 1;
            amp *= pi_amplitude((bits >> shift) & 1, minus, phi);
        }
        for (b, &a) in bell.iter().enumerate() {
            if a != 0.0 {
                amps[(bits << 2) | b] = amp * a;
            }
        }
    }
    let pis: String = (0..(n - 1))
        .map(|j| sign((pi_string >> (n - 2 - j)) & 1 == 1))
        .collect();
    let label = format!("pi[{pis}] {}({},{})", bell_name(kind), n, n + 1);
    Ok((StateVector::from_normalized(m, amps), label))
}

/// `P = <pi|0...0>`, `Q = <pi|1...1>` for a string vector on `N - 1` qubits.
pub fn compute_pq(pi_vec: &StateVector) -> PqValues {
    let amps = pi_vec.amps();
    let p = amps[0].conj();
    let q = amps[amps.len() - 1].conj();
    PqValues {
        p,
        q,
        condition_holds: p.norm() > TOLERANCE && q.norm() > TOLERANCE,
    }
}

/// The `2^(n-1)` product vectors `|pi+->^(n-1)`, indexed like the
/// `pi_string` of [`MeasurementBasis::general`].
pub fn pi_strings(n: usize, phi: f64) -> Result<Vec<StateVector>> {
    if n < 2 || n + 1 > MAX_BASIS_QUBITS {
        return Err(Error::InvalidParameter(format!("N = {n} out of range")));
    }
    let k = n - 1;
    Ok((0..(1usize << k))
        .map(|pi_string| {
            let amps = (0..(1usize << k))
                .map(|bits| {
                    (0..k).fold(Complex64::new(1.0, 0.0), |acc, j| {
                        let shift = k - 1 - j;
                        acc * pi_amplitude((bits >> shift) & 1, (pi_string >> shift) & 1 == 1, phi)
                    })
                })
                .collect();
            StateVector::from_normalized(k, amps)
        })
        .collect())
}
