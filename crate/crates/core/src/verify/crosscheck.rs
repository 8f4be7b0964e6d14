use std::f64::consts::PI;

use rayon::prelude::*;

use super::{CheckReport, Worst};
use crate::bounds::energy_variance;
use crate::dynamics::{decay_rate, AmplitudeDampingTrajectory, DecayModel, Trajectory};
use crate::error::Result;
use crate::geometry::{default_alphas_for, framed_distance_families, permuted_distance, ProjectiveFamily};
use crate::linalg::{
    derive_seed, permutation_unitary, permutations, random_unitary, root_of_unity, Complex64, ComplexMatrix,
    DensityMatrix, GaussianStream, HermitianOperator, UnitaryMatrix,
};

const MATRIX_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const CONVENTION_TOL: f64 = 1e-9;

/// Fourier matrix with shifted exponent `e^{2πi(m+1)(n+1)/N}/√N`.
fn shifted_fourier(n: usize) -> Result<UnitaryMatrix> {
    let norm = 1.0 / (n as f64).sqrt();
    UnitaryMatrix::new(ComplexMatrix::from_fn(n, |m, k| {
        root_of_unity((m + 1) * (k + 1), n) * norm
    }))
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `I/3 + (1/3)·M` with `M` the cyclic arrangement of the shifted spectrum
/// seen on the pair `(0, 1)`.
fn form_01(t: [f64; 3]) -> ComplexMatrix {
    let m = [[t[0], t[2], t[1]], [t[2], t[1], t[0]], [t[1], t[0], t[2]]];
    ComplexMatrix::from_fn(3, |r, k| c(m[r][k] / 3.0)).add_identity(1.0 / 3.0)
}

/// Phased arrangement; `sign = +1` is the form printed for `[ρ0]_02` in the
/// unitary block, `-1` its conjugate printed for `[ρ_t]_12` in the
/// dissipative block.
fn form_phased(t: [f64; 3], sign: f64) -> ComplexMatrix {
    let w = Complex64::from_polar(1.0, sign * 2.0 * PI / 3.0);
    let v = Complex64::from_polar(1.0, sign * PI / 3.0);
    let m = [
        [c(t[0]), w * t[2], -v * t[1]],
        [w.conj() * t[2], c(t[1]), -v.conj() * t[0]],
        [-v.conj() * t[1], -v * t[0], c(t[2])],
    ];
    ComplexMatrix::from_fn(3, |r, k| m[r][k] / 3.0).add_identity(1.0 / 3.0)
}

fn shifted(lambda: &[f64]) -> [f64; 3] {
    [lambda[0] - 1.0 / 3.0, lambda[1] - 1.0 / 3.0, lambda[2] - 1.0 / 3.0]
}

fn shifted_family(state: &DensityMatrix) -> Result<ProjectiveFamily> {
    ProjectiveFamily::with_inner(state, Some(&UnitaryMatrix::identity(3)), &shifted_fourier(3)?)
}

/// `P ρ̇ P` on the pair `(i, j)` of a family's basis.
fn pair_derivative(fam: &ProjectiveFamily, rhodot: &ComplexMatrix, i: usize, j: usize) -> ComplexMatrix {
    let b = fam.basis();
    let (bi, bj) = (b.column(i), b.column(j));
    let p = &ComplexMatrix::outer(&bi, &bi) + &ComplexMatrix::outer(&bj, &bj);
    &(&p * rhodot) * &p
}

fn spectra() -> Vec<(u64, Vec<f64>)> {
    let mut out = vec![
        (0, vec![1.0, 0.0, 0.0]),
        (1, vec![0.5, 0.3, 0.2]),
        (2, vec![0.0, 0.5, 0.5]),
        (3, vec![0.6, 0.2, 0.2]),
        (4, vec![0.2, 0.4, 0.4]),
    ];
    for s in 0..8u64 {
        let mut g = GaussianStream::new(derive_seed(77, &[s]));
        let raw: Vec<f64> = (0..3).map(|_| g.uniform()).collect();
        let total: f64 = raw.iter().sum();
        out.push((5 + s, raw.iter().map(|x| x / total).collect()));
    }
    out
}

fn record(w: &mut Worst, seed: u64, f: impl FnOnce() -> Result<f64>) {
    w.record(f().unwrap_or(f64::INFINITY), seed);
}

fn unitary_block() -> Vec<CheckReport> {
    let mut w01 = Worst::default();
    let mut w02 = Worst::default();
    let mut w12_printed = Worst::default();
    for (seed, lam) in spectra() {
        let t = shifted(&lam);
        record(&mut w01, seed, || {
            let fam = shifted_family(&DensityMatrix::from_diagonal(&lam)?)?;
            Ok(fam.pair(0, 1).max_abs_diff(&form_01(t)))
        });
        record(&mut w02, seed, || {
            let fam = shifted_family(&DensityMatrix::from_diagonal(&lam)?)?;
            Ok(fam.pair(0, 2).max_abs_diff(&form_phased(t, 1.0)))
        });
        record(&mut w12_printed, seed, || {
            let fam = shifted_family(&DensityMatrix::from_diagonal(&lam)?)?;
            Ok(fam.pair(1, 2).max_abs_diff(&form_phased(t, 1.0)))
        });
    }
    vec![
        w01.report("shifted.projective.01", MATRIX_TOL),
        w02.report("shifted.projective.02", MATRIX_TOL),
        w12_printed
            .report("shifted.projective.12_unitary_block", MATRIX_TOL)
            .non_blocking(),
    ]
}

/// Ground-state model with `H = [[0,0,Ω],[0,μE,0],[Ω,0,E]]`.
fn coupled_hamiltonian(e: f64, omega: f64, mu: f64) -> Result<HermitianOperator> {
    let m = [[0.0, 0.0, omega], [0.0, mu * e, 0.0], [omega, 0.0, e]];
    HermitianOperator::new(ComplexMatrix::from_fn(3, |r, k| c(m[r][k])))
}

/// The printed closed forms, one per unordered pair (the `12` entry repeats
/// the `02` one).
fn metric_closed_form(t: [f64; 3], e: f64, o: f64, mu: f64, pair: (usize, usize)) -> f64 {
    let a = (mu - 1.0).powi(2) * e * e + 2.0 * o * o;
    let cc = mu * mu * e * e + 2.0 * o * o;
    let x = 2.0 * o * o + e * o - 2.0 * mu * e * o;
    let body = if pair == (0, 1) {
        a * t[0] * t[0] + e * e * t[1] * t[1] + cc * t[2] * t[2] + 2.0 * e * o * t[0] * t[1] + x * t[0] * t[2]
            - 2.0 * e * o * t[1] * t[2]
    } else {
        a * t[0] * t[0] + (e * e + 3.0 * o * o) * t[1] * t[1] + cc * t[2] * t[2] - e * o * t[0] * t[1] - x * t[0] * t[2]
            + e * o * t[1] * t[2]
    };
    body / 3.0
}

/// Compares the printed closed forms with `ΔE²` from the trace definition.
fn energy_spread() -> Vec<CheckReport> {
    let params = [(1.0, 1.0, 0.5), (1.3, 0.7, 0.2)];
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| {
            let mut w = Worst::default();
            for (k, &(e, o, mu)) in params.iter().enumerate() {
                for (seed, lam) in spectra() {
                    record(&mut w, seed * 2 + k as u64, || {
                        let fam = shifted_family(&DensityMatrix::from_diagonal(&lam)?)?;
                        let de = energy_variance(&coupled_hamiltonian(e, o, mu)?, fam.pair(i, j))?;
                        Ok((de * de - metric_closed_form(shifted(&lam), e, o, mu, (i, j))).abs())
                    });
                }
            }
            w.report(format!("shifted.energy_spread.{i}{j}"), TRACE_TOL)
                .non_blocking()
        })
        .collect()
}

struct DampingSample {
    lambdas: Vec<f64>,
    t: f64,
    p: f64,
    pdot: f64,
    state: DensityMatrix,
    rhodot: ComplexMatrix,
}

fn damping_samples() -> Result<Vec<(u64, DampingSample)>> {
    let models = [DecayModel::constant(1.0)?, DecayModel::ohmic_zero_t(1.0, 4.0)?];
    let mut out = Vec::new();
    for (mi, model) in models.iter().enumerate() {
        for (seed, lam) in spectra() {
            let traj = AmplitudeDampingTrajectory::new(&lam, *model, 3.0)?;
            for (ti, &t) in [0.0, 0.25, 1.0, 2.5].iter().enumerate() {
                let p = traj.survival(t)?;
                out.push((
                    seed * 100 + mi as u64 * 10 + ti as u64,
                    DampingSample {
                        lambdas: lam.clone(),
                        t,
                        p,
                        pdot: -decay_rate(*model, t)? * p,
                        state: traj.state(t)?,
                        rhodot: traj.derivative(t)?.matrix().clone(),
                    },
                ));
            }
        }
    }
    Ok(out)
}

fn dissipative_block() -> Vec<CheckReport> {
    let names = [
        "shifted.dissipative.01",
        "shifted.dissipative.12",
        "shifted.dissipative.02_dissipative_block",
        "shifted.dissipative.linear_in_p",
        "shifted.dissipative.equal_populations",
        "shifted.damping_traces.purity",
        "shifted.damping_traces.rate_square",
        "shifted.damping_traces.cross",
    ];
    let samples = match damping_samples() {
        Ok(s) => s,
        Err(_) => {
            return names
                .iter()
                .map(|n| {
                    CheckReport::errored(
                        *n,
                        if n.starts_with("shifted.damping_traces") {
                            TRACE_TOL
                        } else {
                            MATRIX_TOL
                        },
                    )
                })
                .collect()
        }
    };
    let mut w = [Worst::default(); 8];
    for (seed, s) in &samples {
        let (l1, l2) = (s.lambdas[1], s.lambdas[2]);
        let (t1, t2) = (
            s.p * (l1 - 1.0 / 3.0) - (1.0 - s.p) / 3.0,
            s.p * (l2 - 1.0 / 3.0) - (1.0 - s.p) / 3.0,
        );
        let tt = [-(t1 + t2), t1, t2];
        let fam = shifted_family(&s.state);
        record(&mut w[0], *seed, || {
            Ok(fam.clone()?.pair(0, 1).max_abs_diff(&form_01(tt)))
        });
        record(&mut w[1], *seed, || {
            Ok(fam.clone()?.pair(1, 2).max_abs_diff(&form_phased(tt, -1.0)))
        });
        record(&mut w[2], *seed, || {
            Ok(fam.clone()?.pair(0, 2).max_abs_diff(&form_phased(tt, -1.0)))
        });
        record(&mut w[3], *seed, || {
            let fam = fam.clone()?;
            let f0 = shifted_family(&DensityMatrix::from_diagonal(&s.lambdas)?)?;
            let g = shifted_family(&DensityMatrix::basis_state(3, 0)?)?;
            let mut worst = 0.0f64;
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let mix = &f0.pair(i, j).scale_real(s.p) + &g.pair(i, j).scale_real(1.0 - s.p);
                worst = worst.max(fam.pair(i, j).max_abs_diff(&mix));
            }
            Ok(worst)
        });
        if (l1 - l2).abs() < 1e-15 && (3.0 * l1 - 1.0).abs() > 1e-3 {
            record(&mut w[4], *seed, || {
                let fam = fam.clone()?;
                let f0 = shifted_family(&DensityMatrix::from_diagonal(&s.lambdas)?)?;
                let k = (3.0 * s.p * l1 - 1.0) / (3.0 * l1 - 1.0);
                let pad = 3.0 * l1 * (s.p - k) / 3.0;
                let mut worst = 0.0f64;
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    let target = f0.pair(i, j).scale_real(k).add_identity(pad);
                    worst = worst.max(fam.pair(i, j).max_abs_diff(&target));
                }
                Ok(worst)
            });
        }
        let q = l1 * l1 + l2 * l2 + l1 * l2;
        let purity = 5.0 / 9.0 + 2.0 / 3.0 * (s.p * s.p * q - s.p * (l1 + l2));
        let rate = 2.0 / 3.0 * s.pdot * s.pdot * q;
        let cross = s.pdot / 3.0 * (2.0 * s.p * q - (l1 + l2));
        record(&mut w[5], *seed, || {
            let fam = fam.clone()?;
            Ok([(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| (fam.pair_purity(i, j) - purity).abs())
                .fold(0.0, f64::max))
        });
        record(&mut w[6], *seed, || {
            let fam = fam.clone()?;
            Ok([(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| {
                    let d = pair_derivative(&fam, &s.rhodot, i, j);
                    (d.hs_dot(&d).re - rate).abs()
                })
                .fold(0.0, f64::max))
        });
        record(&mut w[7], *seed, || {
            let fam = fam.clone()?;
            Ok([(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| {
                    let d = pair_derivative(&fam, &s.rhodot, i, j);
                    (fam.pair(i, j).hs_dot(&d).re - cross).abs()
                })
                .fold(0.0, f64::max))
        });
        let _ = s.t;
    }
    names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let tol = if name.starts_with("shifted.damping_traces") {
                TRACE_TOL
            } else {
                MATRIX_TOL
            };
            let r = w[k].report(*name, tol);
            if k == 2 {
                r.non_blocking()
            } else {
                r
            }
        })
        .collect()
}

/// Rebuilds published closed forms: projective matrices in the
/// shifted Fourier convention, the amplitude-damping trace expressions and the
/// printed energy-variance forms (the latter non-blocking). Printed forms that
/// disagree with the trace definition are also reported non-blocking.
pub fn shifted_crosscheck() -> Vec<CheckReport> {
    let mut out = unitary_block();
    out.extend(dissipative_block());
    out.extend(energy_spread());
    out
}

/// `D̃` in the main and the shifted Fourier conventions for pairs of states
/// sharing an eigenframe.
pub fn convention_crosscheck(seed: u64, cases: usize) -> CheckReport {
    let worst = (0..cases)
        .into_par_iter()
        .map(|k| {
            let case_seed = derive_seed(seed, &[k as u64]);
            let n = 2 + k % 3;
            let mut w = Worst::default();
            record(&mut w, case_seed, || convention_case(n, case_seed));
            w
        })
        .reduce(Worst::default, Worst::merge);
    worst.report("convention.permuted_distance", CONVENTION_TOL)
}

fn convention_case(n: usize, seed: u64) -> Result<f64> {
    let mut g = GaussianStream::new(seed);
    let mut spectrum = || -> Result<DensityMatrix> {
        let raw: Vec<f64> = (0..n).map(|_| g.uniform()).collect();
        let total: f64 = raw.iter().sum();
        DensityMatrix::from_diagonal(&raw.iter().map(|x| x / total).collect::<Vec<_>>())
    };
    let (a, b) = (spectrum()?, spectrum()?);
    let u = random_unitary(n, seed ^ 0x3c3c);
    let (ra, rb) = (u.conjugate_state(&a), u.conjugate_state(&b));
    let main = permuted_distance(&ra, &rb, (Some(&u), Some(&u)), None)?.distance;
    let fs = shifted_fourier(n)?;
    let mut best = 0.0f64;
    for perm in permutations(n) {
        let inner = permutation_unitary(&perm)?.compose(&fs);
        let fa = ProjectiveFamily::with_inner(&ra, Some(&u), &inner)?;
        let fb = ProjectiveFamily::with_inner(&rb, Some(&u), &inner)?;
        best = best.max(framed_distance_families(&fa, &fb, &default_alphas_for(&fa, &fb)?)?);
    }
    Ok((best - main).abs())
}
