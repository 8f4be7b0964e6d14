use rayon::prelude::*;

use super::{CheckReport, Worst};
use crate::error::Result;
use crate::geometry::{ordered_pairs, ProjectiveFamily};
use crate::linalg::{derive_seed, fourier_unitary, random_density, random_unitary, ComplexMatrix, GaussianStream};

const IDENTITY_TOL: f64 = 1e-10;
const FLATTENING_TOL: f64 = 1e-12;

/// Violations of the pair-sum, pair-purity, covariance and flattening
/// identities for one random state.
fn structural_case(n: usize, seed: u64) -> Result<[f64; 4]> {
    let mut g = GaussianStream::new(seed);
    let rank = 1 + (g.uniform() * n as f64) as usize % n;
    let rho = random_density(n, rank, derive_seed(seed, &[1]))?;
    let fam = ProjectiveFamily::new(&rho, None)?;
    let nf = n as f64;

    let mut sum = ComplexMatrix::zeros(n);
    let mut purity: f64 = 0.0;
    for ((i, j), m) in fam.pairs() {
        sum = &sum + m.matrix();
        purity = purity.max((m.purity() - (1.0 / nf + 2.0 * fam.lambda(i, j).norm_sqr())).abs());
    }
    let expected = rho.matrix().scale_real(2.0).add_identity(nf - 1.0 - 2.0 / nf);
    let pair_sum = sum.max_abs_diff(&expected);

    let u = random_unitary(n, derive_seed(seed, &[2]));
    let moved = ProjectiveFamily::new(&u.conjugate_state(&rho), Some(&u.compose(fam.frame())))?;
    let covariance = ordered_pairs(n)
        .map(|(i, j)| moved.pair(i, j).max_abs_diff(&u.conjugate(fam.pair(i, j).matrix())))
        .fold(0.0, f64::max);

    // diagonal of U^F† Λ U^F is flat at 1/N
    let f = fourier_unitary(n)?;
    let spectrum: Vec<f64> = (0..n)
        .map(|k| fam.frame().adjoint().conjugate(rho.matrix())[(k, k)].re)
        .collect();
    let mixed = f.adjoint().conjugate(&ComplexMatrix::from_real_diagonal(&spectrum));
    let flattening = (0..n)
        .map(|k| (mixed[(k, k)].re - 1.0 / nf).abs().max(mixed[(k, k)].im.abs()))
        .fold(0.0, f64::max);

    Ok([pair_sum, purity, covariance, flattening])
}

/// Structural identities of projective matrices over `cases` random states,
/// `N` cycling through 2..=6.
pub fn structural_suite(seed: u64, cases: usize) -> Vec<CheckReport> {
    let worst = (0..cases)
        .into_par_iter()
        .map(|k| {
            let n = 2 + k % 5;
            let case_seed = derive_seed(seed, &[0x5157, k as u64]);
            let v = structural_case(n, case_seed).unwrap_or([f64::INFINITY; 4]);
            let mut w = [Worst::default(); 4];
            for (slot, x) in w.iter_mut().zip(v) {
                slot.record(x, case_seed);
            }
            w
        })
        .reduce(
            || [Worst::default(); 4],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = x.merge(y);
                }
                a
            },
        );
    vec![
        worst[0].report("structure.pair_sum", IDENTITY_TOL),
        worst[1].report("structure.pair_purity", IDENTITY_TOL),
        worst[2].report("structure.covariance", IDENTITY_TOL),
        worst[3].report("structure.dft_flattening", FLATTENING_TOL),
    ]
}
