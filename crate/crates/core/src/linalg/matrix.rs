use std::fmt;
use std::ops::{Add, Deref, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 8;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::Dimension(dim))
    }
}

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting unsupported
    /// dimensions and non-finite values.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(k / dim, k % dim));
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_real_diagonal(&vec![1.0; dim])
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, |i, j| v[i] * w[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, k)]).collect()
    }

    pub fn set_column(&mut self, k: usize, v: &[Complex64]) {
        for (i, &z) in v.iter().enumerate() {
            self[(i, k)] = z;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    /// `self + c·I`.
    pub fn add_identity(&self, c: f64) -> Self {
        let mut out = self.clone();
        for k in 0..self.dim {
            out[(k, k)] += c;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    /// Hilbert-Schmidt inner product `Tr(self† other)`.
    pub fn hs_dot(&self, other: &Self) -> Complex64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `self·other - other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| 0.5 * (self[(i, j)] + self[(j, i)].conj()))
    }

    /// Largest `|A_ij - conj(A_ji)|` together with its position.
    fn hermiticity_defect(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        worst
    }

    /// `v† A w` for column vectors.
    pub fn sandwich(&self, v: &[Complex64], w: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..self.dim {
                row += self[(i, j)] * w[j];
            }
            acc += v[i].conj() * row;
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Complex Hermitian matrix: Hamiltonians and `F_α` images.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(ComplexMatrix);

impl HermitianOperator {
    /// Accepts `m` when `max|A_ij - conj(A_ji)| ≤ 1e-12·(1 + max|A|)` and
    /// stores its exactly Hermitian part.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_dim(m.dim())?;
        let (defect, row, col) = m.hermiticity_defect();
        if defect > HERMITIAN_TOL * (1.0 + m.max_abs()) {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation: defect,
            });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Symmetrizes without validation; for operators Hermitian by construction.
    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self(m.hermitian_part())
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `Tr(self·other)`, real for Hermitian arguments.
    pub fn hs_inner(&self, other: &Self) -> Result<f64> {
        hs_inner(self, other)
    }

    pub fn norm(&self) -> f64 {
        self.0.frobenius_norm()
    }
}

impl Deref for HermitianOperator {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Hilbert-Schmidt inner product `Tr(a†b)` of two Hermitian operators.
pub fn hs_inner(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let z = a.hs_dot(b);
    debug_assert!(z.im.abs() <= 1e-12 * (1.0 + z.re.abs()), "imaginary residue {}", z.im);
    Ok(z.re)
}

/// Density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianOperator);

impl DensityMatrix {
    /// Validates a candidate state. Eigenvalues in `[-1e-10, 0)` are clamped to
    /// zero (and the trace restored); anything more negative is rejected.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::from_hermitian(HermitianOperator::new(m)?)
    }

    pub fn from_hermitian(h: HermitianOperator) -> Result<Self> {
        let tr = h.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Trace(tr.re));
        }
        let eig = super::eigen::eig_hermitian(&h)?;
        let min = eig.values[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        if min < 0.0 {
            let clamped: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
            let total: f64 = clamped.iter().sum();
            let clamped: Vec<f64> = clamped.iter().map(|v| v / total).collect();
            return Ok(Self(HermitianOperator::from_matrix_unchecked(
                eig.vectors.conjugate(&ComplexMatrix::from_real_diagonal(&clamped)),
            )));
        }
        Ok(Self(h))
    }

    /// Wraps a matrix that is a state by construction (analytic trajectories,
    /// projective matrices). Only symmetrizes.
    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self(HermitianOperator::from_matrix_unchecked(m))
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(probs))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::from_matrix_unchecked(
            ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        ))
    }

    /// `|k⟩⟨k|` in the computational basis.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        check_dim(dim)?;
        if k >= dim {
            return Err(Error::InvalidParameter(format!("basis index {k} >= {dim}")));
        }
        let mut diag = vec![0.0; dim];
        diag[k] = 1.0;
        Ok(Self::from_matrix_unchecked(ComplexMatrix::from_real_diagonal(&diag)))
    }

    /// `|ψ⟩⟨ψ|/⟨ψ|ψ⟩`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        check_dim(psi.len())?;
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::InvalidParameter("zero or non-finite state vector".into()));
        }
        Ok(Self::from_matrix_unchecked(
            ComplexMatrix::outer(psi, psi).scale_real(1.0 / norm2),
        ))
    }

    pub fn hermitian(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0 .0
    }

    pub fn purity(&self) -> f64 {
        self.0 .0.hs_dot(&self.0 .0).re
    }
}

impl Deref for DensityMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0 .0
    }
}

/// Unitary matrix: eigenframes, DFT, permutations, propagators.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_dim(m.dim())?;
        let defect = unitarity_defect(&m);
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// `U A U†`.
    pub fn conjugate(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(&self.0 * a) * &self.0.adjoint()
    }

    pub fn conjugate_state(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(self.conjugate(rho.matrix()))
    }

    pub fn conjugate_hermitian(&self, h: &HermitianOperator) -> HermitianOperator {
        HermitianOperator::from_matrix_unchecked(self.conjugate(h.matrix()))
    }
}

impl Deref for UnitaryMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// `max |U†U - I|`.
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    let g = &m.adjoint() * m;
    g.max_abs_diff(&ComplexMatrix::identity(m.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> HermitianOperator {
        HermitianOperator::new(ComplexMatrix::new(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap())
            .unwrap()
    }

    fn pauli_z() -> HermitianOperator {
        HermitianOperator::from_real_diagonal(&[1.0, -1.0]).unwrap()
    }

    #[test]
    fn hs_inner_trivial_values() {
        let id = HermitianOperator::from_real_diagonal(&[1.0, 1.0]).unwrap();
        assert_eq!(hs_inner(&id, &id).unwrap(), 2.0);
        assert_eq!(hs_inner(&pauli_x(), &pauli_z()).unwrap(), 0.0);
    }

    #[test]
    fn hs_inner_dimension_mismatch() {
        let a = HermitianOperator::from_real_diagonal(&[1.0, 1.0]).unwrap();
        let b = HermitianOperator::from_real_diagonal(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(hs_inner(&a, &b), Err(Error::DimensionMismatch(2, 3)));
    }

    #[test]
    fn hs_inner_matches_elementwise_sum() {
        for seed in 0..20 {
            let a = crate::linalg::random_hermitian(5, seed);
            let direct: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum();
            assert!((hs_inner(&a, &a).unwrap() - direct).abs() < 1e-12 * direct);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(ComplexMatrix::new(1, vec![c(1., 0.)]), Err(Error::Dimension(1)));
        assert_eq!(ComplexMatrix::new(9, vec![c(0., 0.); 81]), Err(Error::Dimension(9)));
        assert!(matches!(
            ComplexMatrix::new(2, vec![c(0., 0.); 3]),
            Err(Error::EntryCount { expected: 4, got: 3 })
        ));
        assert_eq!(
            ComplexMatrix::new(2, vec![c(0., 0.), c(f64::NAN, 0.), c(0., 0.), c(0., 0.)]),
            Err(Error::NonFinite(0, 1))
        );
        let skew = ComplexMatrix::new(2, vec![c(0., 0.), c(0., 1.), c(0., 1.), c(0., 0.)]).unwrap();
        assert!(matches!(
            HermitianOperator::new(skew),
            Err(Error::NotHermitian { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn density_validation() {
        assert!(matches!(
            DensityMatrix::from_diagonal(&[0.5, 0.6]),
            Err(Error::Trace(_))
        ));
        assert!(matches!(
            DensityMatrix::from_diagonal(&[1.5, -0.5]),
            Err(Error::NotPositive(_))
        ));
        // Tiny negative eigenvalue is clamped.
        let rho = DensityMatrix::from_diagonal(&[1.0 + 1e-12, -1e-12]).unwrap();
        assert!(rho[(1, 1)].re >= 0.0);
        assert!((rho.trace().re - 1.0).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        assert!((mixed.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn unitary_validation() {
        assert!(UnitaryMatrix::new(ComplexMatrix::identity(3)).is_ok());
        assert!(matches!(
            UnitaryMatrix::new(ComplexMatrix::identity(3).scale_real(1.1)),
            Err(Error::NotUnitary(_))
        ));
    }
}
