use rayon::prelude::*;

use super::alpha::{AlphaAssignment, AlphaValue};
use super::distance::{unit_angle, unit_image};
use super::projective::{ordered_pairs, ProjectiveFamily};
use crate::error::{Error, Result};
use crate::linalg::{check_dim, permutations, DensityMatrix, UnitaryMatrix, MAX_DIM};

/// Permutations whose totals differ by less than this are treated as tied.
const TIE_TOL: f64 = 1e-12;
/// Pair purities this close to `1/N` fall back to `α = 1`.
const PURITY_FLOOR: f64 = 1e-12;

/// `α_ij = max(Tr[ρ0]²_ij, Tr[ρτ]²_ij)`, replaced by 1 for pairs at the
/// maximally mixed floor.
pub fn default_alphas_for(fam0: &ProjectiveFamily, famtau: &ProjectiveFamily) -> Result<AlphaAssignment> {
    let n = fam0.dim();
    if famtau.dim() != n {
        return Err(Error::DimensionMismatch(n, famtau.dim()));
    }
    let floor = 1.0 / n as f64 + PURITY_FLOOR;
    AlphaAssignment::from_fn(n, |i, j| {
        let a = fam0.pair_purity(i, j).max(famtau.pair_purity(i, j));
        if a <= floor {
            AlphaValue::one(n)
        } else {
            AlphaValue::new(a, n)
        }
    })
}

/// [`default_alphas_for`] with both families built in the solver's
/// eigenframes.
pub fn default_alphas(rho0: &DensityMatrix, rhotau: &DensityMatrix) -> Result<AlphaAssignment> {
    if rho0.dim() != rhotau.dim() {
        return Err(Error::DimensionMismatch(rho0.dim(), rhotau.dim()));
    }
    default_alphas_for(
        &ProjectiveFamily::new(rho0, None)?,
        &ProjectiveFamily::new(rhotau, None)?,
    )
}

/// Per-pair distances `D_{α_ij}([ρ]_ij, [σ]_ij)` in ascending pair order.
pub fn pair_distances(a: &ProjectiveFamily, b: &ProjectiveFamily, alphas: &AlphaAssignment) -> Result<Vec<f64>> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch(n, b.dim()));
    }
    if alphas.dim() != n {
        return Err(Error::DimensionMismatch(n, alphas.dim()));
    }
    Ok(ordered_pairs(n)
        .map(|(i, j)| {
            let alpha = alphas.get(i, j).value();
            unit_angle(
                &unit_image(a.pair(i, j).matrix(), alpha),
                &unit_image(b.pair(i, j).matrix(), alpha),
            )
        })
        .collect())
}

/// `D̄` between two prebuilt families.
pub fn framed_distance_families(a: &ProjectiveFamily, b: &ProjectiveFamily, alphas: &AlphaAssignment) -> Result<f64> {
    Ok(pair_distances(a, b, alphas)?.iter().sum())
}

/// `D̄(ρ, σ) = Σ_{i≠j} D_{α_ij}([ρ]_ij, [σ]_ij)` over ordered pairs, with the
/// projective matrices of `ρ` built in frame `Φ` and those of `σ` in `Ψ`
/// (solver eigenframes where `None`).
pub fn framed_distance(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    frames: (Option<&UnitaryMatrix>, Option<&UnitaryMatrix>),
    alphas: &AlphaAssignment,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    framed_distance_families(
        &ProjectiveFamily::new(rho, frames.0)?,
        &ProjectiveFamily::new(sigma, frames.1)?,
        alphas,
    )
}

/// Result of the permutation search.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutedDistance {
    pub distance: f64,
    pub permutation: Vec<usize>,
    pub alphas: AlphaAssignment,
}

/// `D̃`: the maximum of [`framed_distance`] over all permutations of the
/// eigen-index. Ties within `1e-12` go to the lexicographically smallest
/// permutation. With `alphas = None` each permutation uses
/// [`default_alphas_for`] on its own families.
pub fn permuted_distance(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    frames: (Option<&UnitaryMatrix>, Option<&UnitaryMatrix>),
    alphas: Option<&AlphaAssignment>,
) -> Result<PermutedDistance> {
    let n = rho.dim();
    if sigma.dim() != n {
        return Err(Error::DimensionMismatch(n, sigma.dim()));
    }
    check_dim(n)?;
    if n > MAX_DIM {
        return Err(Error::Dimension(n));
    }
    let candidates: Vec<(f64, Vec<usize>, AlphaAssignment)> = permutations(n)
        .into_par_iter()
        .map(|perm| {
            let a = ProjectiveFamily::permuted(rho, frames.0, &perm)?;
            let b = ProjectiveFamily::permuted(sigma, frames.1, &perm)?;
            let al = match alphas {
                Some(al) => al.clone(),
                None => default_alphas_for(&a, &b)?,
            };
            Ok((framed_distance_families(&a, &b, &al)?, perm, al))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(f64, Vec<usize>, AlphaAssignment)> = None;
    for cand in candidates {
        match &best {
            Some((d, _, _)) if cand.0 <= d + TIE_TOL => {}
            _ => best = Some(cand),
        }
    }
    let (distance, permutation, alphas) = best.expect("at least one permutation");
    Ok(PermutedDistance {
        distance,
        permutation,
        alphas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::distance_alpha;
    use crate::linalg::{random_density, random_unitary, ComplexMatrix};
    use std::f64::consts::PI;

    #[test]
    fn zero_for_identical_states() {
        let rho = random_density(3, 2, 4).unwrap();
        let al = default_alphas(&rho, &rho).unwrap();
        assert!(framed_distance(&rho, &rho, (None, None), &al).unwrap() < 1e-6);
        let p = permuted_distance(&rho, &rho, (None, None), None).unwrap();
        assert!(p.distance < 1e-6);
        assert_eq!(p.permutation, vec![0, 1, 2]);
    }

    #[test]
    fn qubit_reduces_to_twice_d_alpha() {
        for seed in 0..10 {
            let rho = random_density(2, 2, seed).unwrap();
            let sigma = random_density(2, 1, seed + 50).unwrap();
            let a = AlphaValue::new(0.8, 2).unwrap();
            let al = AlphaAssignment::uniform(a);
            let d = framed_distance(&rho, &sigma, (None, None), &al).unwrap();
            assert!((d - 2.0 * distance_alpha(&rho, &sigma, a).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_pure_states() {
        let up = DensityMatrix::basis_state(2, 0).unwrap();
        let down = DensityMatrix::basis_state(2, 1).unwrap();
        let p = permuted_distance(&up, &down, (None, None), None).unwrap();
        assert!((p.distance - 2.0 * PI).abs() < 1e-9);

        let a = DensityMatrix::basis_state(3, 0).unwrap();
        let b = DensityMatrix::basis_state(3, 1).unwrap();
        let id = UnitaryMatrix::identity(3);
        let p = permuted_distance(&a, &b, (Some(&id), Some(&id)), None).unwrap();
        assert!((p.distance - 4.0 * PI).abs() < 1e-9, "{}", p.distance);
    }

    #[test]
    fn default_alpha_policy() {
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        let al = default_alphas(&mixed, &mixed).unwrap();
        for (i, j) in ordered_pairs(3) {
            assert_eq!(al.get(i, j).value(), 1.0);
        }
        let pure = DensityMatrix::basis_state(3, 0).unwrap();
        let fam = ProjectiveFamily::new(&pure, None).unwrap();
        let al = default_alphas(&pure, &pure).unwrap();
        for (i, j) in ordered_pairs(3) {
            let expected = 1.0 / 3.0 + 2.0 * fam.lambda(i, j).norm_sqr();
            assert!((al.get(i, j).value() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn depolarized_endpoint_keeps_initial_alpha() {
        let rho = random_density(3, 1, 9).unwrap();
        let p = 0.4;
        let mixed = rho.matrix().scale_real(p).add_identity((1.0 - p) / 3.0);
        let tau = DensityMatrix::new(mixed).unwrap();
        let frame = ProjectiveFamily::new(&rho, None).unwrap().frame().clone();
        let f0 = ProjectiveFamily::new(&rho, Some(&frame)).unwrap();
        let ft = ProjectiveFamily::new(&tau, Some(&frame)).unwrap();
        let al = default_alphas_for(&f0, &ft).unwrap();
        for (i, j) in ordered_pairs(3) {
            let v = f0.pair_purity(i, j);
            let expected = if v <= 1.0 / 3.0 + 1e-12 { 1.0 } else { v };
            assert!((al.get(i, j).value() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn framed_distance_unitary_invariance() {
        let rho = random_density(3, 3, 21).unwrap();
        let sigma = random_density(3, 2, 22).unwrap();
        let u = random_unitary(3, 23);
        let fr = ProjectiveFamily::new(&rho, None).unwrap().frame().clone();
        let fs = ProjectiveFamily::new(&sigma, None).unwrap().frame().clone();
        let al = default_alphas(&rho, &sigma).unwrap();
        let d1 = framed_distance(&rho, &sigma, (Some(&fr), Some(&fs)), &al).unwrap();
        let (ur, us) = (u.compose(&fr), u.compose(&fs));
        let d2 = framed_distance(
            &u.conjugate_state(&rho),
            &u.conjugate_state(&sigma),
            (Some(&ur), Some(&us)),
            &al,
        )
        .unwrap();
        assert!((d1 - d2).abs() < 1e-10);
        let _ = ComplexMatrix::zeros(2);
    }
}
