//! Pure states of qubit registers and the exact operations on them.

use alloc::vec;
use alloc::vec::Vec;

// Only needed without std; with std linked the inherent f64 methods win.
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::matrix::CMatrix;
use crate::{MAX_QUBITS, TOLERANCE};

/// One complex amplitude.
pub type Amplitude = Complex64;

const ZERO: Amplitude = Complex64::new(0.0, 0.0);

/// Normalized pure state of `n_qubits >= 1` qubits.
///
/// Qubit `j` (1-based) is bit `n_qubits - j` of the amplitude index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

/// Unnormalized vector left on the unmeasured qubits after a projection.
///
/// `n_qubits` may be zero, in which case `amps` holds a single overlap.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

pub(crate) fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::EmptyRegister);
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Range and distinctness check for a list of 1-based qubit labels.
pub(crate) fn check_qubits(n_qubits: usize, qubits: &[usize]) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if q == 0 || q > n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Splits a full amplitude index into (selected, rest) sub-indices.
///
/// The selected qubits keep the order they were listed in (first listed is
/// the most significant bit); the rest keep ascending label order.
pub(crate) struct IndexSplit {
    selected: Vec<u32>,
    rest: Vec<u32>,
}

impl IndexSplit {
    pub(crate) fn new(n_qubits: usize, selected: &[usize]) -> Self {
        let selected_shifts = selected.iter().map(|&q| (n_qubits - q) as u32).collect();
        let rest = (1..=n_qubits)
            .filter(|q| !selected.contains(q))
            .map(|q| (n_qubits - q) as u32)
            .collect();
        Self {
            selected: selected_shifts,
            rest,
        }
    }

    pub(crate) fn rest_len(&self) -> usize {
        self.rest.len()
    }

    fn gather(shifts: &[u32], index: usize) -> usize {
        let k = shifts.len();
        shifts
            .iter()
            .enumerate()
            .fold(0, |acc, (t, &s)| acc | (((index >> s) & 1) << (k - 1 - t)))
    }

    pub(crate) fn split(&self, index: usize) -> (usize, usize) {
        (
            Self::gather(&self.selected, index),
            Self::gather(&self.rest, index),
        )
    }
}

impl StateVector {
    /// Normalizing constructor (`make_state`).
    pub fn new(n_qubits: usize, amps: Vec<Amplitude>) -> Result<Self> {
        check_register(n_qubits)?;
        let expected = 1usize << n_qubits;
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= f64::MIN_POSITIVE {
            return Err(Error::ZeroVector);
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n_qubits, amps })
    }

    /// Real-amplitude convenience wrapper over [`StateVector::new`].
    pub fn from_real(n_qubits: usize, amps: &[f64]) -> Result<Self> {
        Self::new(
            n_qubits,
            amps.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(alloc::format!(
                "basis index {index} outside 0..{dim}"
            )));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Computational basis state from a ket label such as `"01000"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let mut index = 0usize;
        for ch in bits.chars() {
            index = match ch {
                '0' => index << 1,
                '1' => (index << 1) | 1,
                _ => {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "bad ket label {bits:?}"
                    )))
                }
            };
        }
        Self::basis_state(bits.len(), index)
    }

    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis_state(n_qubits, 0)
    }

    /// Wraps amplitudes that are already normalized by construction.
    pub(crate) fn from_normalized(n_qubits: usize, amps: Vec<Amplitude>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        debug_assert!(
            (amps.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-8,
            "state is not normalized"
        );
        Self { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Amplitude> {
        self.amps
    }

    pub fn amplitude(&self, index: usize) -> Amplitude {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Number of amplitudes with modulus above `tol`.
    pub fn support_size(&self, tol: f64) -> usize {
        self.amps.iter().filter(|a| a.norm() > tol).count()
    }

    /// `|self> (x) |other>`; `self` keeps the lower qubit labels.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        check_register(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            if *a == ZERO {
                amps.extend(core::iter::repeat_n(ZERO, other.amps.len()));
            } else {
                amps.extend(other.amps.iter().map(|b| a * b));
            }
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Amplitude> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`, blind to global phase.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `min_theta || self - e^{i theta} other ||`.
    pub fn phase_aligned_distance(&self, other: &Self) -> Result<f64> {
        let overlap = other.inner(self)?;
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b * phase).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn apply_gate(&self, gate: &Gate, targets: &[usize]) -> Result<Self> {
        if targets.len() != gate.arity() {
            return Err(Error::ArityMismatch {
                expected: gate.arity(),
                found: targets.len(),
            });
        }
        self.apply_matrix(gate.matrix(), targets)
    }

    /// Applies a `2^k x 2^k` matrix to `k` target qubits; the first target
    /// is the most significant bit of the matrix index.
    pub fn apply_matrix(&self, matrix: &CMatrix, targets: &[usize]) -> Result<Self> {
        check_qubits(self.n_qubits, targets)?;
        let k = targets.len();
        let sub = 1usize << k;
        if matrix.rows() != sub || matrix.cols() != sub {
            return Err(Error::ArityMismatch {
                expected: k,
                found: matrix.rows().trailing_zeros() as usize,
            });
        }
        let shifts: Vec<usize> = targets.iter().map(|&q| self.n_qubits - q).collect();
        let mask: usize = shifts.iter().map(|s| 1usize << s).sum();
        let offsets: Vec<usize> = (0..sub)
            .map(|l| {
                (0..k)
                    .filter(|t| (l >> (k - 1 - t)) & 1 == 1)
                    .map(|t| 1usize << shifts[t])
                    .sum()
            })
            .collect();
        let mut out = self.amps.clone();
        let mut local = vec![ZERO; sub];
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            for (l, off) in offsets.iter().enumerate() {
                local[l] = self.amps[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                out[base | off] = matrix.row(r).iter().zip(&local).map(|(m, v)| m * v).sum();
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amps: out,
        })
    }

    /// Partial inner product `<basis_vec|self>` over the `measured` qubits.
    ///
    /// `basis_vec` qubit `i` is identified with `measured[i]`; the residual
    /// lives on the remaining qubits in ascending label order.
    pub fn project(&self, basis_vec: &StateVector, measured: &[usize]) -> Result<Residual> {
        Ok(self
            .project_many(core::slice::from_ref(basis_vec), measured)?
            .pop()
            .expect("one vector in, one residual out"))
    }

    /// [`StateVector::project`] for several basis vectors at once.
    ///
    /// The nonzero amplitudes are gathered once, so each additional vector
    /// costs time proportional to the support of the state.
    pub fn project_many(
        &self,
        vectors: &[StateVector],
        measured: &[usize],
    ) -> Result<Vec<Residual>> {
        check_qubits(self.n_qubits, measured)?;
        for v in vectors {
            if v.n_qubits != measured.len() {
                return Err(Error::WrongQubitCount {
                    expected: measured.len(),
                    found: v.n_qubits,
                });
            }
        }
        let split = IndexSplit::new(self.n_qubits, measured);
        let support: Vec<(usize, usize, Amplitude)> = self
            .amps
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != ZERO)
            .map(|(i, a)| {
                let (m, r) = split.split(i);
                (m, r, *a)
            })
            .collect();
        let rest = split.rest_len();
        Ok(vectors
            .iter()
            .map(|v| {
                let mut amps = vec![ZERO; 1 << rest];
                for &(m, r, a) in &support {
                    amps[r] += v.amps[m].conj() * a;
                }
                Residual {
                    n_qubits: rest,
                    amps,
                }
            })
            .collect())
    }

    /// Reduced density matrix of the `keep` qubits (in the listed order).
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::DegeneratePartition);
        }
        check_qubits(self.n_qubits, keep)?;
        let split = IndexSplit::new(self.n_qubits, keep);
        let kept_dim = 1usize << keep.len();
        let traced_dim = 1usize << split.rest_len();
        let mut block = CMatrix::zeros(kept_dim, traced_dim);
        for (i, a) in self.amps.iter().enumerate() {
            if *a != ZERO {
                let (k, t) = split.split(i);
                block[(k, t)] = *a;
            }
        }
        let rho = block.matmul(&block.adjoint())?;
        Ok(DensityMatrix::from_trusted(keep.len(), rho))
    }
}

impl Residual {
    pub fn new(n_qubits: usize, amps: Vec<Amplitude>) -> Result<Self> {
        let expected = 1usize << n_qubits;
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: amps.len(),
            });
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amps(&self) -> &[Amplitude] {
        &self.amps
    }

    /// Squared norm, i.e. the outcome probability.
    pub fn probability(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.probability() <= tol * tol
    }

    /// Normalized state together with the norm that was divided out.
    pub fn normalize(&self) -> Result<(StateVector, f64)> {
        let norm = self.probability().sqrt();
        if norm <= TOLERANCE {
            return Err(Error::ZeroVector);
        }
        let state = StateVector::new(self.n_qubits, self.amps.clone())?;
        Ok((state, norm))
    }
}
