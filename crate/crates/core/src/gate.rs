//! Unitary gates on one or two qubits.

use alloc::string::{String, ToString};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::TOLERANCE;

/// A named one- or two-qubit unitary.
///
/// For two-qubit gates the first target is the more significant bit of the
/// matrix index (for `CNOT`, the control).
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    label: String,
    matrix: CMatrix,
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Gate {
    /// Validates size and unitarity.
    pub fn new(label: impl Into<String>, matrix: CMatrix) -> Result<Self> {
        if !(matrix.rows() == 2 || matrix.rows() == 4) || !matrix.is_square() {
            return Err(Error::InvalidParameter(alloc::format!(
                "gate matrix must be 2x2 or 4x4, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_unitary(TOLERANCE) {
            return Err(Error::NotUnitary);
        }
        Ok(Self {
            label: label.into(),
            matrix,
        })
    }

    fn fixed(label: &str, matrix: CMatrix) -> Self {
        Self {
            label: label.to_string(),
            matrix,
        }
    }

    pub fn identity() -> Self {
        Self::fixed("I", CMatrix::identity(2))
    }

    /// sigma_x
    pub fn x() -> Self {
        Self::fixed("X", CMatrix::real2(0.0, 1.0, 1.0, 0.0))
    }

    /// sigma_y
    pub fn y() -> Self {
        Self::fixed(
            "Y",
            CMatrix::from_rows(&[[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
                .expect("2x2"),
        )
    }

    /// sigma_z
    pub fn z() -> Self {
        Self::fixed("Z", CMatrix::real2(1.0, 0.0, 0.0, -1.0))
    }

    pub fn h() -> Self {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        Self::fixed("H", CMatrix::real2(s, s, s, -s))
    }

    /// `i sigma_y = [[0, 1], [-1, 0]]`.
    pub fn i_y() -> Self {
        Self::fixed("iY", CMatrix::real2(0.0, 1.0, -1.0, 0.0))
    }

    /// `-i sigma_y = [[0, -1], [1, 0]]`.
    pub fn neg_i_y() -> Self {
        Self::fixed("-iY", CMatrix::real2(0.0, -1.0, 1.0, 0.0))
    }

    /// `-sigma_x`.
    pub fn neg_x() -> Self {
        Self::fixed("-X", CMatrix::real2(0.0, -1.0, -1.0, 0.0))
    }

    pub fn cnot() -> Self {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(1.0, 0.0);
        m[(1, 1)] = c(1.0, 0.0);
        m[(2, 3)] = c(1.0, 0.0);
        m[(3, 2)] = c(1.0, 0.0);
        Self::fixed("CNOT", m)
    }

    /// Looks up one of the named gates above.
    pub fn by_name(name: &str) -> Option<Self> {
        Some(match name {
            "I" => Self::identity(),
            "X" => Self::x(),
            "Y" => Self::y(),
            "Z" => Self::z(),
            "H" => Self::h(),
            "iY" => Self::i_y(),
            "-iY" => Self::neg_i_y(),
            "-X" => Self::neg_x(),
            "CNOT" => Self::cnot(),
            _ => return None,
        })
    }

    /// Names a 2x2 unitary if it is exactly one of the single-qubit named
    /// gates, otherwise labels it `fallback`.
    pub fn from_unitary(matrix: CMatrix, fallback: &str) -> Result<Self> {
        for name in ["I", "X", "Y", "Z", "H", "iY", "-iY", "-X"] {
            let g = Self::by_name(name).expect("known name");
            if g.matrix.max_abs_diff(&matrix) <= TOLERANCE {
                return Ok(g);
            }
        }
        Self::new(fallback, matrix)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        if self.matrix.rows() == 4 {
            2
        } else {
            1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .max_abs_diff(&CMatrix::identity(self.matrix.rows()))
            <= TOLERANCE
    }

    pub fn adjoint(&self) -> Self {
        let matrix = self.matrix.adjoint();
        let label = match self.label.as_str() {
            "iY" => "-iY".to_string(),
            "-iY" => "iY".to_string(),
            l @ ("I" | "X" | "Y" | "Z" | "H" | "-X" | "CNOT") => l.to_string(),
            other => alloc::format!("{other}^dag"),
        };
        Self { label, matrix }
    }
}
