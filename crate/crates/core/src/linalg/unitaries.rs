use std::f64::consts::PI;

use num_complex::Complex64;

use super::eigen::{eig_hermitian, EigenDecomposition};
use super::matrix::{check_dim, ComplexMatrix, HermitianOperator, UnitaryMatrix};
use crate::error::{Error, Result};

/// `e^{2πi·k/n}` with the exponent reduced mod `n` before evaluation.
pub(crate) fn root_of_unity(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % n) as f64 / n as f64)
}

/// Discrete Fourier transform `U_mn = e^{2πi·mn/N}/√N` with zero-based
/// indices.
pub fn fourier_unitary(n: usize) -> Result<UnitaryMatrix> {
    check_dim(n)?;
    let norm = 1.0 / (n as f64).sqrt();
    Ok(UnitaryMatrix::from_matrix_unchecked(ComplexMatrix::from_fn(
        n,
        |m, k| root_of_unity(m * k, n) * norm,
    )))
}

/// Permutation matrix with `U[perm[j], j] = 1`.
pub fn permutation_unitary(perm: &[usize]) -> Result<UnitaryMatrix> {
    let n = perm.len();
    check_dim(n)?;
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Permutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    let mut m = ComplexMatrix::zeros(n);
    for (j, &p) in perm.iter().enumerate() {
        m[(p, j)] = Complex64::new(1.0, 0.0);
    }
    Ok(UnitaryMatrix::from_matrix_unchecked(m))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    // next_permutation
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
}

/// Cached spectral decomposition of a time-independent Hamiltonian, so that
/// `exp(-iHt)` can be evaluated at many times with one diagonalization.
#[derive(Clone, Debug)]
pub struct Propagator {
    spectrum: EigenDecomposition,
}

impl Propagator {
    pub fn new(h: &HermitianOperator) -> Result<Self> {
        Ok(Self {
            spectrum: eig_hermitian(h)?,
        })
    }

    /// `exp(-iHt) = Φ e^{-iΛt} Φ†`.
    pub fn at(&self, t: f64) -> UnitaryMatrix {
        UnitaryMatrix::from_matrix_unchecked(self.spectrum.reconstruct_with(|e| Complex64::from_polar(1.0, -e * t)))
    }

    pub fn spectrum(&self) -> &EigenDecomposition {
        &self.spectrum
    }
}

/// `exp(-iHt)` via eigendecomposition.
pub fn propagator(h: &HermitianOperator, t: f64) -> Result<UnitaryMatrix> {
    Ok(Propagator::new(h)?.at(t))
}
