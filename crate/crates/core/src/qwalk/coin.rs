use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::dense::DenseMatrix;
use crate::tol;
use crate::{Error, Result};

/// A unitary acting on the coin register.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinOperator {
    matrix: DenseMatrix,
}

impl CoinOperator {
    /// Accepts `matrix` if it is unitary to within [`tol::ALGEBRAIC`].
    pub fn from_matrix(matrix: DenseMatrix) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::InvalidDimension("empty coin".into()));
        }
        let dev = matrix.unitarity_deviation();
        if dev > tol::ALGEBRAIC {
            return Err(Error::UnsupportedCoin(format!(
                "matrix is not unitary (deviation {dev:e})"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_matrix(DenseMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// `C · v` for a coin-space vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(v)
    }

    pub(crate) fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim();
        for (i, o) in out.iter_mut().enumerate().take(d) {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, x) in v.iter().enumerate().take(d) {
                acc += self.matrix[(i, j)] * x;
            }
            *o = acc;
        }
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&rhs.matrix),
        }
    }

    pub fn unitarity_deviation(&self) -> f64 {
        self.matrix.unitarity_deviation()
    }
}

fn hadamard() -> DenseMatrix {
    let h = FRAC_1_SQRT_2;
    DenseMatrix::from_real_rows(2, &[h, h, h, -h])
}

/// `H` for one coin qubit, `H ⊗ H` for two.
pub fn make_hadamard_coin(qubits: usize) -> Result<CoinOperator> {
    match qubits {
        1 => CoinOperator::from_matrix(hadamard()),
        2 => CoinOperator::from_matrix(hadamard().kron(&hadamard())),
        k => Err(Error::UnsupportedCoin(format!(
            "Hadamard coin on {k} qubits"
        ))),
    }
}

fn dft_matrix(d: usize) -> DenseMatrix {
    let scale = 1.0 / (d as f64).sqrt();
    let mut m = DenseMatrix::zeros(d);
    for j in 0..d {
        for k in 0..d {
            // reduce jk mod d before exponentiating to keep the phase exact
            let phase = 2.0 * PI * ((j * k) % d) as f64 / d as f64;
            m[(j, k)] = Complex64::from_polar(scale, phase);
        }
    }
    m
}

/// The `d`-dimensional discrete Fourier coin, entries `ω^{jk}/√d`.
pub fn make_dft_coin(d: usize) -> Result<CoinOperator> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!(
            "DFT coin needs d >= 2, got {d}"
        )));
    }
    CoinOperator::from_matrix(dft_matrix(d))
}

/// `DFT₃` padded to a two-qubit gate: the 3×3 block in the top-left corner and
/// `|11⟩` left untouched.
pub fn embed_dft3_gate() -> CoinOperator {
    let dft3 = dft_matrix(3);
    let mut m = DenseMatrix::zeros(4);
    for j in 0..3 {
        for k in 0..3 {
            m[(j, k)] = dft3[(j, k)];
        }
    }
    m[(3, 3)] = Complex64::new(1.0, 0.0);
    CoinOperator::from_matrix(m).expect("padded DFT3 is unitary")
}
