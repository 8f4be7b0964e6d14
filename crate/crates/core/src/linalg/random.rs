//! Seeded random states and unitaries.
//!
//! The stream is ChaCha20 seeded through `SeedableRng::seed_from_u64`, which is
//! portable and stable across platforms. Normal deviates come from the
//! Box–Muller transform applied to consecutive uniform pairs, so every value
//! here is a pure function of its seed.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::matrix::{check_dim, ComplexMatrix, DensityMatrix, HermitianOperator, UnitaryMatrix};
use crate::error::{Error, Result};

/// Standard normal deviates from a seeded ChaCha20 stream.
pub struct GaussianStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite.
        let u1 = 1.0 - self.rng.gen::<f64>();
        let u2 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    /// Complex normal with unit total variance.
    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Mixes a base seed with case coordinates (SplitMix64 finalizer), for
/// deriving independent per-case seeds.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut z = base;
    for &p in parts {
        z = z.wrapping_add(p.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// `ρ = GG†/Tr(GG†)` with `G` an `n×rank` complex Gaussian matrix.
pub fn random_density(n: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    check_dim(n)?;
    if rank == 0 || rank > n {
        return Err(Error::InvalidParameter(format!("rank {rank} outside 1..={n}")));
    }
    let mut stream = GaussianStream::new(seed);
    let g: Vec<Complex64> = (0..n * rank).map(|_| stream.complex_normal()).collect();
    let mut m = ComplexMatrix::from_fn(n, |i, j| {
        (0..rank).map(|k| g[i * rank + k] * g[j * rank + k].conj()).sum()
    });
    let tr = m.trace().re;
    m = m.scale_real(1.0 / tr);
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// Haar-random unitary: Gram–Schmidt on a complex Gaussian matrix, which
/// leaves the triangular factor with a real positive diagonal.
pub fn random_unitary(n: usize, seed: u64) -> UnitaryMatrix {
    let mut stream = GaussianStream::new(seed);
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| stream.complex_normal()).collect())
        .collect();
    for k in 0..n {
        // two passes of modified Gram–Schmidt for orthogonality at roundoff level
        for _ in 0..2 {
            for j in 0..k {
                let proj: Complex64 = (0..n).map(|i| cols[j][i].conj() * cols[k][i]).sum();
                let (head, tail) = cols.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= proj * y;
                }
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[k].iter_mut() {
            *z /= norm;
        }
    }
    let m = ComplexMatrix::from_fn(n, |i, j| cols[j][i]);
    UnitaryMatrix::from_matrix_unchecked(m)
}

/// Hermitian matrix with complex Gaussian entries (GUE-like scale).
pub fn random_hermitian(n: usize, seed: u64) -> HermitianOperator {
    let mut stream = GaussianStream::new(seed);
    let g = ComplexMatrix::from_fn(n, |_, _| stream.complex_normal());
    HermitianOperator::from_matrix_unchecked(g)
}
