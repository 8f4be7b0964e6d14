use rayon::prelude::*;

use super::{CheckReport, Worst};
use crate::bounds::speed_alpha;
use crate::dynamics::{
    AmplitudeDampingTrajectory, CustomTrajectory, DecayModel, DephasingTrajectory, DepolarizingTrajectory,
    ProbabilitySchedule, Trajectory, UnitaryTrajectory,
};
use crate::error::{Error, Result};
use crate::geometry::{distance_alpha, AlphaValue};
use crate::linalg::{derive_seed, random_density, random_hermitian, DensityMatrix, GaussianStream, HermitianOperator};

/// Central-difference step used by the speed oracle.
pub const FD_STEP: f64 = 1e-6;
const ORACLE_TOL: f64 = 1e-5;
/// Speeds below this are compared absolutely.
const SPEED_FLOOR: f64 = 1e-8;

/// `D_α(ρ_{t-h}, ρ_{t+h})/(2h)`.
pub fn finite_diff_speed(traj: &dyn Trajectory, t: f64, h: f64, alpha: AlphaValue) -> Result<f64> {
    let tau = traj.horizon();
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("step {h} must be positive")));
    }
    if !(t - h >= 0.0 && t + h <= tau) {
        return Err(Error::InvalidParameter(format!(
            "[{}, {}] not inside [0, {tau}]",
            t - h,
            t + h
        )));
    }
    Ok(distance_alpha(&traj.state(t - h)?, &traj.state(t + h)?, alpha)? / (2.0 * h))
}

fn family(kind: usize, n: usize, seed: u64) -> Result<Box<dyn Trajectory>> {
    let tau = 2.0;
    let rho = random_density(n, 1 + (seed as usize) % n, seed)?;
    Ok(match kind {
        0 => Box::new(UnitaryTrajectory::new(random_hermitian(n, seed ^ 0x5a5a), rho, tau)?),
        1 => Box::new(DepolarizingTrajectory::new(
            rho,
            ProbabilitySchedule::exponential(0.7)?,
            tau,
        )?),
        2 | 3 => {
            let mut g = GaussianStream::new(seed);
            let raw: Vec<f64> = (0..n).map(|_| g.uniform() + 0.05).collect();
            let total: f64 = raw.iter().sum();
            let lambdas: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let decay = if kind == 2 {
                DecayModel::constant(0.8)?
            } else {
                DecayModel::ohmic_zero_t(1.0, 4.0)?
            };
            Box::new(AmplitudeDampingTrajectory::new(&lambdas, decay, tau)?)
        }
        4 => Box::new(DephasingTrajectory::from_state(rho, 0.6, tau)?),
        _ => {
            // straight line ρ_t = ρ + t(σ - ρ)/τ with random endpoints
            let sigma = random_density(n, n, seed ^ 0xa5a5)?;
            let delta = (sigma.matrix() - rho.matrix()).scale_real(1.0 / tau);
            let (r, d) = (rho.matrix().clone(), delta.clone());
            Box::new(CustomTrajectory::new(
                n,
                tau,
                move |t| DensityMatrix::new(&r + &d.scale_real(t)),
                move |_| HermitianOperator::new(delta.clone()),
            )?)
        }
    })
}

const FAMILIES: [&str; 6] = [
    "unitary",
    "depolarizing",
    "amplitude_damping",
    "amplitude_damping_ohmic",
    "dephasing",
    "linear",
];

/// Agreement of `speed_alpha` with [`finite_diff_speed`] over every dynamics
/// family, `cases` random instances each.
pub fn speed_oracle_suite(seed: u64, cases: usize, alphas: &[f64]) -> Vec<CheckReport> {
    FAMILIES
        .iter()
        .enumerate()
        .map(|(kind, name)| {
            let check = format!("oracle.speed.{name}");
            let worst = (0..cases)
                .into_par_iter()
                .map(|c| {
                    let case_seed = derive_seed(seed, &[kind as u64, c as u64]);
                    let n = 2 + c % 5;
                    let mut w = Worst::default();
                    let violation = oracle_case(kind, n, case_seed, alphas[c % alphas.len()]).unwrap_or(f64::INFINITY);
                    w.record(violation, case_seed);
                    w
                })
                .reduce(Worst::default, Worst::merge);
            worst.report(check, ORACLE_TOL)
        })
        .collect()
}

fn oracle_case(kind: usize, n: usize, seed: u64, alpha: f64) -> Result<f64> {
    let traj = family(kind, n, seed)?;
    let mut g = GaussianStream::new(seed ^ 0x77);
    let t = 0.05 + 1.9 * g.uniform();
    let alpha = AlphaValue::new(alpha, n)?;
    let exact = speed_alpha(&traj.state(t)?, &traj.derivative(t)?, alpha)?;
    let fd = finite_diff_speed(traj.as_ref(), t, FD_STEP, alpha)?;
    Ok((fd - exact).abs() / exact.max(SPEED_FLOOR))
}
