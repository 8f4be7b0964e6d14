use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{permutations, Complex64, ComplexMatrix};

/// `D̃` between orthogonal basis states at `N = 4`, recorded from the first
/// verified run of [`orthogonal_brute_force`].
pub const ORTHOGONAL_N4_GOLDEN: f64 = 8.0 * PI;

fn dft_column(n: usize, k: usize) -> Vec<Complex64> {
    let norm = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|m| Complex64::from_polar(norm, 2.0 * PI * ((m * k) % n) as f64 / n as f64))
        .collect()
}

fn pair_matrix(state: &ComplexMatrix, bi: &[Complex64], bj: &[Complex64]) -> ComplexMatrix {
    let n = state.dim();
    let p = ComplexMatrix::from_fn(n, |r, c| bi[r] * bi[c].conj() + bj[r] * bj[c].conj());
    let q = &ComplexMatrix::identity(n) - &p;
    &(&(&p * state) * &p) + &q.scale_real(1.0 / n as f64)
}

fn embed(m: &ComplexMatrix, alpha: f64) -> ComplexMatrix {
    let n = m.dim() as f64;
    let purity: f64 = m.entries().iter().map(|z| z.norm_sqr()).sum();
    let shifted = m.add_identity(-(1.0 + alpha - purity) / n);
    let norm = shifted.frobenius_norm();
    shifted.scale_real(1.0 / norm)
}

/// Principal-branch `arccos` of the Hilbert–Schmidt overlap.
fn angle(a: &ComplexMatrix, b: &ComplexMatrix, alpha: f64) -> f64 {
    let (ea, eb) = (embed(a, alpha), embed(b, alpha));
    let overlap: f64 = ea
        .entries()
        .iter()
        .zip(eb.entries())
        .map(|(x, y)| (x.conj() * y).re)
        .sum();
    overlap.clamp(-1.0, 1.0).acos()
}

fn basis_projector(n: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |r, c| {
        if r == k && c == k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn permuted_sum(n: usize, perm: &[usize], a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    // b_k = P F e_k with P|j⟩ = |perm[j]⟩
    let basis: Vec<Vec<Complex64>> = (0..n)
        .map(|k| {
            let col = dft_column(n, k);
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (j, &p) in perm.iter().enumerate() {
                out[p] = col[j];
            }
            out
        })
        .collect();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let pa = pair_matrix(a, &basis[i], &basis[j]);
            let pb = pair_matrix(b, &basis[i], &basis[j]);
            let purity = |m: &ComplexMatrix| m.entries().iter().map(|z| z.norm_sqr()).sum::<f64>();
            let top = purity(&pa).max(purity(&pb));
            let alpha = if top <= 1.0 / n as f64 + 1e-12 {
                1.0
            } else {
                top.min(1.0)
            };
            total += angle(&pa, &pb, alpha);
        }
    }
    total
}

/// Largest permuted framed distance between `|m⟩⟨m|` and `|n⟩⟨n|` over all
/// permutations and all `m ≠ n`, evaluated from scratch in identity frames.
pub fn orthogonal_brute_force(n: usize) -> Result<f64> {
    if !(2..=5).contains(&n) {
        return Err(Error::Dimension(n));
    }
    let perms = permutations(n);
    let mut best = 0.0f64;
    for m in 0..n {
        for k in 0..n {
            if m == k {
                continue;
            }
            let (a, b) = (basis_projector(n, m), basis_projector(n, k));
            for perm in &perms {
                best = best.max(permuted_sum(n, perm, &a, &b));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::orthogonal_reference_distance;
    use crate::geometry::permuted_distance;
    use crate::linalg::{DensityMatrix, UnitaryMatrix};

    #[test]
    fn small_dimensions() {
        assert!((orthogonal_brute_force(2).unwrap() - 2.0 * PI).abs() < 1e-9);
        assert!((orthogonal_brute_force(3).unwrap() - 4.0 * PI).abs() < 1e-9);
        assert!((orthogonal_brute_force(4).unwrap() - ORTHOGONAL_N4_GOLDEN).abs() < 1e-9);
        assert!(orthogonal_brute_force(6).is_err());
        assert!(orthogonal_brute_force(1).is_err());
    }

    #[test]
    fn closed_form_disagrees_beyond_qubits() {
        let two = orthogonal_reference_distance(2).unwrap();
        assert!((two - orthogonal_brute_force(2).unwrap()).abs() < 1e-9);
        let three = orthogonal_reference_distance(3).unwrap();
        assert!((three - orthogonal_brute_force(3).unwrap()).abs() > 1.0);
    }

    #[test]
    fn agrees_with_permuted_distance() {
        for n in 2..=5 {
            let id = UnitaryMatrix::identity(n);
            let mut best = 0.0f64;
            for m in 0..n {
                for k in 0..n {
                    if m != k {
                        let a = DensityMatrix::basis_state(n, m).unwrap();
                        let b = DensityMatrix::basis_state(n, k).unwrap();
                        best = best.max(
                            permuted_distance(&a, &b, (Some(&id), Some(&id)), None)
                                .unwrap()
                                .distance,
                        );
                    }
                }
            }
            assert!((best - orthogonal_brute_force(n).unwrap()).abs() < 1e-9, "n = {n}");
        }
    }
}
