use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::state::StateVector;
use crate::TOLERANCE;

/// Density operator of `n_qubits` qubits: Hermitian, unit trace, PSD.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validating constructor.
    pub fn new(n_qubits: usize, entries: CMatrix) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if entries.rows() != dim || entries.cols() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: entries.rows(),
            });
        }
        if !entries.is_hermitian(TOLERANCE) {
            return Err(Error::InvalidDensityMatrix("not Hermitian"));
        }
        if (entries.trace() - Complex64::new(1.0, 0.0)).norm() > TOLERANCE {
            return Err(Error::InvalidDensityMatrix("trace is not 1"));
        }
        let smallest = entries
            .hermitian_eigenvalues()?
            .first()
            .copied()
            .unwrap_or(0.0);
        if smallest < -TOLERANCE {
            return Err(Error::InvalidDensityMatrix("negative eigenvalue"));
        }
        Ok(Self { n_qubits, entries })
    }

    pub(crate) fn from_trusted(n_qubits: usize, entries: CMatrix) -> Self {
        Self { n_qubits, entries }
    }

    /// `|psi><psi|`.
    pub fn from_pure(state: &StateVector) -> Self {
        Self {
            n_qubits: state.n_qubits(),
            entries: CMatrix::outer(state.amps(), state.amps()),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn eigenvalues(&self) -> Result<alloc::vec::Vec<f64>> {
        self.entries.hermitian_eigenvalues()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let e = &self.entries;
        let mut sum = 0.0;
        for r in 0..e.rows() {
            for c in 0..e.cols() {
                sum += e[(r, c)].norm_sqr();
            }
        }
        sum
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_with(&self, state: &StateVector) -> Result<f64> {
        let v = self.entries.mul_vec(state.amps())?;
        let f: Complex64 = state.amps().iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        Ok(f.re)
    }

    /// `U rho U^dagger`.
    pub fn conjugate_by(&self, unitary: &CMatrix) -> Result<Self> {
        let m = unitary.matmul(&self.entries)?.matmul(&unitary.adjoint())?;
        Ok(Self {
            n_qubits: self.n_qubits,
            entries: m,
        })
    }

    /// Largest entrywise deviation between two density matrices.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.max_abs_diff(&other.entries)
    }
}
