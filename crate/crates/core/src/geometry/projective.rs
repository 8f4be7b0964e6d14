use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, fourier_unitary, permutation_unitary, Complex64, ComplexMatrix, DensityMatrix, UnitaryMatrix,
};

const FRAME_TOL: f64 = 1e-8;

/// Ordered pairs `(i, j)`, `i ≠ j`, in ascending lexicographic order.
pub fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// Largest off-diagonal modulus of `Φ† ρ Φ`.
pub fn frame_defect(rho: &ComplexMatrix, frame: &UnitaryMatrix) -> f64 {
    let d = frame.adjoint().conjugate(rho);
    let n = d.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                worst = worst.max(d[(i, j)].norm());
            }
        }
    }
    worst
}

/// Checks that `frame` diagonalizes `rho` within `1e-8`.
pub fn check_frame(rho: &DensityMatrix, frame: &UnitaryMatrix) -> Result<()> {
    if frame.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), frame.dim()));
    }
    let defect = frame_defect(rho.matrix(), frame);
    if defect > FRAME_TOL {
        return Err(Error::FrameMismatch(defect));
    }
    Ok(())
}

/// The solver's eigenframe of `rho`.
pub fn eigenframe(rho: &DensityMatrix) -> Result<UnitaryMatrix> {
    Ok(eig_hermitian(rho.hermitian())?.vectors)
}

/// Projective matrices `[ρ]_ij` of a state over all ordered pairs of the
/// basis `b_k = Φ W e_k`, where `W` is the Fourier matrix (optionally
/// preceded by a permutation of the eigen-index).
#[derive(Clone, Debug)]
pub struct ProjectiveFamily {
    source: DensityMatrix,
    frame: UnitaryMatrix,
    basis: ComplexMatrix,
    pairs: BTreeMap<(usize, usize), DensityMatrix>,
    offdiag: BTreeMap<(usize, usize), Complex64>,
}

impl ProjectiveFamily {
    /// General constructor: `inner` is the unitary `W` placed between the
    /// eigenframe and the pair projectors.
    pub fn with_inner(rho: &DensityMatrix, frame: Option<&UnitaryMatrix>, inner: &UnitaryMatrix) -> Result<Self> {
        let n = rho.dim();
        if inner.dim() != n {
            return Err(Error::DimensionMismatch(n, inner.dim()));
        }
        let frame = match frame {
            Some(f) => {
                check_frame(rho, f)?;
                f.clone()
            }
            None => eigenframe(rho)?,
        };
        let basis = frame.matrix() * inner.matrix();
        let cols: Vec<Vec<Complex64>> = (0..n).map(|k| basis.column(k)).collect();
        let fill = 1.0 / n as f64;
        let mut pairs: BTreeMap<(usize, usize), DensityMatrix> = BTreeMap::new();
        let mut offdiag = BTreeMap::new();
        for (i, j) in ordered_pairs(n) {
            if i > j {
                // [ρ]_ij depends only on the unordered pair
                let twin: DensityMatrix = pairs[&(j, i)].clone();
                pairs.insert((i, j), twin);
                offdiag.insert((i, j), rho.sandwich(&cols[i], &cols[j]));
                continue;
            }
            let p = &ComplexMatrix::outer(&cols[i], &cols[i]) + &ComplexMatrix::outer(&cols[j], &cols[j]);
            let compressed = &(&p * rho.matrix()) * &p;
            let pad = (&ComplexMatrix::identity(n) - &p).scale_real(fill);
            pairs.insert((i, j), DensityMatrix::from_matrix_unchecked(&compressed + &pad));
            offdiag.insert((i, j), rho.sandwich(&cols[i], &cols[j]));
        }
        Ok(Self {
            source: rho.clone(),
            frame,
            basis,
            pairs,
            offdiag,
        })
    }

    /// Family in the Fourier basis of `frame` (the solver's eigenframe when
    /// `None`).
    pub fn new(rho: &DensityMatrix, frame: Option<&UnitaryMatrix>) -> Result<Self> {
        Self::with_inner(rho, frame, &fourier_unitary(rho.dim())?)
    }

    /// Family with the eigen-index permuted before the Fourier transform,
    /// i.e. basis `Φ U^P U^F e_k`.
    pub fn permuted(rho: &DensityMatrix, frame: Option<&UnitaryMatrix>, perm: &[usize]) -> Result<Self> {
        if perm.len() != rho.dim() {
            return Err(Error::Permutation(perm.to_vec()));
        }
        let inner = permutation_unitary(perm)?.compose(&fourier_unitary(rho.dim())?);
        Self::with_inner(rho, frame, &inner)
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn source(&self) -> &DensityMatrix {
        &self.source
    }

    pub fn frame(&self) -> &UnitaryMatrix {
        &self.frame
    }

    /// Columns are the basis vectors `b_k`.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn pair(&self, i: usize, j: usize) -> &DensityMatrix {
        &self.pairs[&(i, j)]
    }

    /// `λ_ij = b_i† ρ b_j`.
    pub fn lambda(&self, i: usize, j: usize) -> Complex64 {
        self.offdiag[&(i, j)]
    }

    /// `Tr [ρ]_ij²`.
    pub fn pair_purity(&self, i: usize, j: usize) -> f64 {
        self.pair(i, j).purity()
    }

    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), &DensityMatrix)> {
        self.pairs.iter().map(|(k, v)| (*k, v))
    }
}

/// Convenience wrapper for [`ProjectiveFamily::new`].
pub fn projective_family(rho: &DensityMatrix, frame: Option<&UnitaryMatrix>) -> Result<ProjectiveFamily> {
    ProjectiveFamily::new(rho, frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_density, random_unitary};

    #[test]
    fn maximally_mixed_family() {
        for n in 2..=5 {
            let rho = DensityMatrix::maximally_mixed(n).unwrap();
            let fam = projective_family(&rho, None).unwrap();
            for ((i, j), m) in fam.pairs() {
                assert!(m.max_abs_diff(rho.matrix()) < 1e-14);
                assert!(fam.lambda(i, j).norm() < 1e-14);
            }
            assert_eq!(fam.pairs().count(), n * (n - 1));
        }
    }

    #[test]
    fn qubit_pair_is_state_itself() {
        let rho = random_density(2, 2, 11).unwrap();
        let fam = projective_family(&rho, None).unwrap();
        assert!(fam.pair(0, 1).max_abs_diff(rho.matrix()) < 1e-12);
        assert!(fam.pair(1, 0).max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn sum_and_purity_identities() {
        for seed in 0..40 {
            let n = 2 + seed as usize % 5;
            let rho = random_density(n, 1 + seed as usize % n, seed).unwrap();
            let fam = projective_family(&rho, None).unwrap();
            let mut sum = ComplexMatrix::zeros(n);
            for ((i, j), m) in fam.pairs() {
                sum = &sum + m.matrix();
                let expected = 1.0 / n as f64 + 2.0 * fam.lambda(i, j).norm_sqr();
                assert!((m.purity() - expected).abs() < 1e-10);
                assert!(m.max_abs_diff(fam.pair(j, i)) < 1e-12);
                assert!((m.trace().re - 1.0).abs() < 1e-12);
                assert!(DensityMatrix::new(m.matrix().clone()).is_ok());
            }
            let nf = n as f64;
            let rhs = rho.matrix().scale_real(2.0).add_identity(nf - 1.0 - 2.0 / nf);
            assert!(sum.max_abs_diff(&rhs) < 1e-10);
        }
    }

    #[test]
    fn lambda_is_fourier_conjugated_spectrum() {
        // λ_ij = (U^F Λ U^F†)_ij for a diagonal state in the identity frame
        let lam = [0.5, 0.3, 0.2];
        let rho = DensityMatrix::from_diagonal(&lam).unwrap();
        let id = UnitaryMatrix::identity(3);
        let fam = projective_family(&rho, Some(&id)).unwrap();
        let f = fourier_unitary(3).unwrap();
        let target = f.adjoint().conjugate(&ComplexMatrix::from_real_diagonal(&lam));
        for (i, j) in ordered_pairs(3) {
            assert!((fam.lambda(i, j) - target[(i, j)]).norm() < 1e-14);
        }
    }

    #[test]
    fn covariance_under_unitaries() {
        for seed in 0..20 {
            let n = 2 + seed as usize % 4;
            let rho = random_density(n, n, seed).unwrap();
            let u = random_unitary(n, seed + 77);
            let fam = projective_family(&rho, None).unwrap();
            let moved = u.conjugate_state(&rho);
            let frame = u.compose(fam.frame());
            let fam2 = projective_family(&moved, Some(&frame)).unwrap();
            for ((i, j), m) in fam.pairs() {
                assert!(fam2.pair(i, j).max_abs_diff(&u.conjugate(m.matrix())) < 1e-10);
            }
        }
    }

    #[test]
    fn rejects_wrong_frame() {
        let rho = random_density(3, 3, 5).unwrap();
        let u = random_unitary(3, 6);
        assert!(matches!(
            projective_family(&rho, Some(&u)),
            Err(Error::FrameMismatch(_))
        ));
        assert!(projective_family(&rho, Some(&UnitaryMatrix::identity(4))).is_err());
    }

    #[test]
    fn permuted_identity_matches_plain() {
        let rho = random_density(4, 2, 8).unwrap();
        let a = projective_family(&rho, None).unwrap();
        let b = ProjectiveFamily::permuted(&rho, None, &[0, 1, 2, 3]).unwrap();
        for ((i, j), m) in a.pairs() {
            assert!(m.max_abs_diff(b.pair(i, j)) < 1e-15);
        }
        assert!(ProjectiveFamily::permuted(&rho, None, &[0, 1, 2]).is_err());
    }

    #[test]
    fn ordered_pair_enumeration() {
        let p: Vec<_> = ordered_pairs(3).collect();
        assert_eq!(p, vec![(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]);
    }
}
