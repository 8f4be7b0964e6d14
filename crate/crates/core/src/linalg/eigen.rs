//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Each rotation zeroes one off-diagonal pair `(p, q)`. For the Hermitian
//! block `[[a, z], [z̄, b]]` with `z = r·e^{iφ}` the rotation is
//!
//! ```text
//! J = [[ c,          s·e^{iφ} ],
//!      [ -s·e^{-iφ}, c        ]]
//! ```
//!
//! where `(c, s)` is the real Jacobi rotation for `[[a, r], [r, b]]`. Sweeps run
//! over `p < q` in row-major order until the off-diagonal Frobenius mass drops
//! below `1e-13·‖A‖_F`.
//!
//! Results are bitwise reproducible for identical input: rotation order is
//! fixed and eigenpairs are sorted ascending with a stable sort, so a
//! degenerate eigenspace keeps the basis the rotations left behind.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HermitianOperator, UnitaryMatrix};
use crate::error::{Error, Result};

const OFF_DIAGONAL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 64;

/// Eigenvalues ascending; column `k` of `vectors` belongs to `values[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: UnitaryMatrix,
}

impl EigenDecomposition {
    /// `Φ·diag(f(λ))·Φ†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let v = self.vectors.matrix();
        let fv: Vec<Complex64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| v[(i, k)] * fv[k] * v[(j, k)].conj()).sum())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| Complex64::new(x, 0.0))
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian operator by cyclic Jacobi rotations.
pub fn eig_hermitian(h: &HermitianOperator) -> Result<EigenDecomposition> {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let target = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenConvergence { sweeps, off });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let diag: Vec<f64> = (0..n).map(|k| a[(k, k)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition {
        values,
        vectors: UnitaryMatrix::from_matrix_unchecked(vectors),
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let z = a[(p, q)];
    let r = z.norm();
    if r == 0.0 {
        return;
    }
    let n = a.dim();
    let phase = z / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let s_phase = phase * s; // s·e^{iφ}

    // A ← A·J (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s_phase.conj();
        a[(k, q)] = akp * s_phase + akq * c;
    }
    // A ← J†·A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s_phase;
        a[(q, k)] = apk * s_phase.conj() + aqk * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s_phase.conj();
        v[(k, q)] = vkp * s_phase + vkq * c;
    }
}
