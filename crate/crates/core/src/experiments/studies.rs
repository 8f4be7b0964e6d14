use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::table::Table;
use crate::bounds::{tau_alpha, tau_qsl, tau_qsl_closed, EnergySpec, QslReport, MIN_GRID};
use crate::dynamics::{
    decay_rate, AmplitudeDampingTrajectory, DecayModel, DephasingTrajectory, Trajectory, UnitaryTrajectory,
};
use crate::error::{Error, Result};
use crate::geometry::AlphaValue;
use crate::linalg::{fourier_unitary, Complex64, ComplexMatrix, DensityMatrix, HermitianOperator};

/// Pure-state tolerance for the dephasing purity warning.
const PURITY_WARN: f64 = 1e-9;
const SIMPLEX_SLACK: f64 = 1e-12;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Inclusive arithmetic sweep `start, start + step, …, stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn values(&self) -> Result<Vec<f64>> {
        let Sweep { start, stop, step } = *self;
        if !(start.is_finite() && stop.is_finite() && step.is_finite() && step > 0.0 && stop >= start) {
            return Err(invalid(format!(
                "sweep {start}..{stop} step {step} is empty or ill-formed"
            )));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // computed from the index, not accumulated, so values are reproducible
        Ok((0..count).map(|k| start + step * k as f64).collect())
    }
}

/// Evolution-time sweep shared by the time studies: `0.1, 0.2, …, 3`.
pub const DEFAULT_TAUS: Sweep = Sweep {
    start: 0.1,
    stop: 3.0,
    step: 0.1,
};

/// `H_0 = diag(0, μE_m, E_m)`.
pub fn h0(e_m: f64, mu: f64) -> Result<HermitianOperator> {
    HermitianOperator::from_real_diagonal(&[0.0, mu * e_m, e_m])
}

/// `H_0 + Ω(|0⟩⟨2| + |2⟩⟨0|)`.
pub fn h0_plus_h1(e_m: f64, omega: f64, mu: f64) -> Result<HermitianOperator> {
    let mut m = h0(e_m, mu)?.into_matrix();
    m[(0, 2)] = Complex64::new(omega, 0.0);
    m[(2, 0)] = Complex64::new(omega, 0.0);
    HermitianOperator::new(m)
}

/// `H_T = U^F H_0 U^F†`; rejects degenerate spectra.
pub fn h_optimal(e_m: f64, mu: f64) -> Result<(HermitianOperator, EnergySpec)> {
    let spec = EnergySpec::new(&[0.0, mu * e_m, e_m])?;
    let f = fourier_unitary(3)?;
    let h = HermitianOperator::new(f.conjugate(&ComplexMatrix::from_real_diagonal(spec.energies())))?;
    Ok((h, spec))
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < MIN_GRID {
        return Err(invalid(format!("grid of {grid} points, need at least {MIN_GRID}")));
    }
    Ok(())
}

/// `α = max(Tr ρ_0², Tr ρ_τ²)`, or 1 when both sit at the maximally mixed
/// floor.
pub fn endpoint_alpha(traj: &dyn Trajectory) -> Result<AlphaValue> {
    let n = traj.dim();
    let a = traj.state(0.0)?.purity().max(traj.state(traj.horizon())?.purity());
    if a <= 1.0 / n as f64 + 1e-12 {
        AlphaValue::one(n)
    } else {
        AlphaValue::new(a.min(1.0), n)
    }
}

/// Closed-system study parameters (defaults `E_m = 1`, `Ω = E_m`, `μ = 0.5`).
#[derive(Clone, Debug, PartialEq)]
pub struct Fig1Params {
    pub e_m: f64,
    pub omega: f64,
    pub mu: f64,
    pub taus: Sweep,
    pub grid: usize,
}

impl Default for Fig1Params {
    fn default() -> Self {
        Self {
            e_m: 1.0,
            omega: 1.0,
            mu: 0.5,
            taus: DEFAULT_TAUS,
            grid: MIN_GRID,
        }
    }
}

/// Closed-form framed bounds at one `τ` for `H_T` and `H_0 + H_1`, from the
/// ground state.
pub fn fig1_point(p: &Fig1Params, tau: f64) -> Result<(QslReport, QslReport)> {
    check_grid(p.grid)?;
    let (ht, spec) = h_optimal(p.e_m, p.mu)?;
    if !(tau > 0.0 && tau <= PI / spec.max_gap() * (1.0 + 1e-12)) {
        return Err(invalid(format!("tau {tau} outside (0, π/{}]", spec.max_gap())));
    }
    let rho0 = DensityMatrix::basis_state(3, 0)?;
    let opt = tau_qsl_closed(vec![(ht, tau)], &rho0, tau, p.grid)?;
    let other = tau_qsl_closed(vec![(h0_plus_h1(p.e_m, p.omega, p.mu)?, tau)], &rho0, tau, p.grid)?;
    Ok((opt, other))
}

pub fn fig1(p: &Fig1Params) -> Result<Table> {
    let taus = p.taus.values()?;
    let rows: Vec<(QslReport, QslReport)> = taus.par_iter().map(|&t| fig1_point(p, t)).collect::<Result<_>>()?;
    let mut table = Table::new(
        "closed-system framed bound vs evolution time",
        &["tau", "bound_opt", "ratio_opt", "bound_h0h1", "ratio_h0h1"],
    );
    table.param("e_m", p.e_m);
    table.param("omega", p.omega);
    table.param("mu", p.mu);
    push_sweep(&mut table, "tau", p.taus);
    table.param("grid", p.grid);
    for (tau, (a, b)) in taus.iter().zip(&rows) {
        table.converged &= a.converged && b.converged;
        table.rows.push(vec![*tau, a.bound, a.ratio, b.bound, b.ratio]);
    }
    Ok(table)
}

fn push_sweep(table: &mut Table, name: &str, s: Sweep) {
    table.param(&format!("{name}_start"), s.start);
    table.param(&format!("{name}_stop"), s.stop);
    table.param(&format!("{name}_step"), s.step);
}

/// Populations `(λ_0, λ_1, λ_2)`; `λ_2` defaults to the remainder.
pub fn three_level_populations(lambda0: f64, lambda1: f64, lambda2: Option<f64>) -> Result<[f64; 3]> {
    let rest = 1.0 - lambda0;
    let lambda2 = lambda2.unwrap_or(rest - lambda1);
    let l = [lambda0, lambda1, lambda2];
    if l.iter().any(|x| !x.is_finite() || *x < -SIMPLEX_SLACK) {
        return Err(invalid(format!("populations {l:?} must be non-negative")));
    }
    if lambda1 + lambda2 > rest + SIMPLEX_SLACK {
        return Err(invalid(format!(
            "lambda1 + lambda2 = {} exceeds 1 - lambda0 = {rest}",
            lambda1 + lambda2
        )));
    }
    if (l.iter().sum::<f64>() - 1.0).abs() > SIMPLEX_SLACK {
        return Err(invalid(format!("populations {l:?} do not sum to 1")));
    }
    Ok(l.map(|x| x.max(0.0)))
}

/// `λ_1` values `0, …, 1 - λ_0` in `steps` points.
fn lambda1_sweep(lambda0: f64, steps: usize) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&lambda0) {
        return Err(invalid(format!("lambda0 {lambda0} outside [0, 1)")));
    }
    if steps < 2 {
        return Err(invalid("a population sweep needs at least 2 points"));
    }
    let rest = 1.0 - lambda0;
    Ok((0..steps).map(|k| rest * k as f64 / (steps - 1) as f64).collect())
}

/// Markovian amplitude-damping study (`γ = 1`, `τ = 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct Fig2Params {
    pub lambda0: f64,
    /// A single point instead of the sweep.
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub gamma: f64,
    pub tau: f64,
    pub steps: usize,
    pub grid: usize,
}

impl Default for Fig2Params {
    fn default() -> Self {
        Self {
            lambda0: 0.0,
            lambda1: None,
            lambda2: None,
            gamma: 1.0,
            tau: 1.0,
            steps: 21,
            grid: MIN_GRID,
        }
    }
}

pub fn fig2_point(p: &Fig2Params, lambdas: [f64; 3]) -> Result<QslReport> {
    check_grid(p.grid)?;
    let traj = AmplitudeDampingTrajectory::new(&lambdas, DecayModel::constant(p.gamma)?, p.tau)?;
    tau_qsl(&traj, p.grid, None)
}

fn population_points(lambda0: f64, lambda1: Option<f64>, lambda2: Option<f64>, steps: usize) -> Result<Vec<[f64; 3]>> {
    match (lambda1, lambda2) {
        (Some(l1), l2) => Ok(vec![three_level_populations(lambda0, l1, l2)?]),
        (None, Some(l2)) => {
            let l1 = 1.0 - lambda0 - l2;
            Ok(vec![three_level_populations(lambda0, l1, Some(l2))?])
        }
        (None, None) => lambda1_sweep(lambda0, steps)?
            .into_iter()
            .map(|l1| three_level_populations(lambda0, l1, None))
            .collect(),
    }
}

pub fn fig2(p: &Fig2Params) -> Result<Table> {
    let points = population_points(p.lambda0, p.lambda1, p.lambda2, p.steps)?;
    let reports: Vec<QslReport> = points.par_iter().map(|l| fig2_point(p, *l)).collect::<Result<_>>()?;
    let mut table = Table::new(
        "amplitude damping framed bound vs populations",
        &["lambda1", "lambda2", "ratio"],
    );
    table.param("lambda0", p.lambda0);
    table.param("gamma", p.gamma);
    table.param("tau", p.tau);
    table.param("steps", points.len());
    table.param("grid", p.grid);
    for (l, r) in points.iter().zip(&reports) {
        table.converged &= r.converged;
        table.rows.push(vec![l[1], l[2], r.ratio]);
    }
    Ok(table)
}

/// Non-Markovian study with the Ohmic zero-temperature rate.
#[derive(Clone, Debug, PartialEq)]
pub struct NonMarkovParams {
    pub omega_c: f64,
    pub k: f64,
    pub taus: Sweep,
    pub grid: usize,
}

impl Default for NonMarkovParams {
    fn default() -> Self {
        Self {
            omega_c: 1.0,
            k: 4.0,
            taus: DEFAULT_TAUS,
            grid: MIN_GRID,
        }
    }
}

/// `(γ_τ, report)` for the maximally mixed initial state.
pub fn nonmarkov_point(p: &NonMarkovParams, tau: f64) -> Result<(f64, QslReport)> {
    check_grid(p.grid)?;
    let model = DecayModel::ohmic_zero_t(p.omega_c, p.k)?;
    let traj = AmplitudeDampingTrajectory::new(&[1.0 / 3.0; 3], model, tau)?;
    Ok((decay_rate(model, tau)?, tau_qsl(&traj, p.grid, None)?))
}

pub fn nonmarkov(p: &NonMarkovParams) -> Result<Table> {
    let taus = p.taus.values()?;
    let rows: Vec<(f64, QslReport)> = taus.par_iter().map(|&t| nonmarkov_point(p, t)).collect::<Result<_>>()?;
    let mut table = Table::new(
        "non-Markovian damping framed bound vs evolution time",
        &["tau", "gamma_tau", "ratio"],
    );
    table.param("omega_c", p.omega_c);
    table.param("k", p.k);
    push_sweep(&mut table, "tau", p.taus);
    table.param("grid", p.grid);
    for (tau, (g, r)) in taus.iter().zip(&rows) {
        table.converged &= r.converged;
        table.rows.push(vec![*tau, *g, r.ratio]);
    }
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TauAlphaStudy {
    Amplitude,
    Dephasing,
    Unitary,
}

/// Unframed-bound studies.
#[derive(Clone, Debug, PartialEq)]
pub struct TauAlphaParams {
    pub study: TauAlphaStudy,
    pub lambda0: f64,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    /// Coherence between levels 2 and 0; defaults to `√(λ_0 λ_2)`.
    pub lambda20: Option<f64>,
    pub gamma: f64,
    pub tau: f64,
    pub steps: usize,
    pub e_m: f64,
    pub omega: f64,
    pub mu: f64,
    pub taus: Sweep,
    pub grid: usize,
}

impl Default for TauAlphaParams {
    fn default() -> Self {
        Self {
            study: TauAlphaStudy::Amplitude,
            lambda0: 0.0,
            lambda1: None,
            lambda2: None,
            lambda20: None,
            gamma: 1.0,
            tau: 1.0,
            steps: 21,
            e_m: 1.0,
            omega: 1.0,
            mu: 0.5,
            taus: DEFAULT_TAUS,
            grid: MIN_GRID,
        }
    }
}

/// Dephasing trajectory from populations and the `(0, 2)` coherence.
pub fn dephasing_study_trajectory(
    lambdas: [f64; 3],
    lambda20: Option<f64>,
    gamma: f64,
    tau: f64,
) -> Result<DephasingTrajectory> {
    let c = lambda20.unwrap_or((lambdas[0] * lambdas[2]).sqrt());
    let mut coh = BTreeMap::new();
    coh.insert((0, 2), Complex64::new(c, 0.0));
    DephasingTrajectory::new(&lambdas, &coh, gamma, tau)
}

/// `(α, report)` of the unframed bound at one population point.
pub fn tau_alpha_point(p: &TauAlphaParams, lambdas: [f64; 3]) -> Result<(AlphaValue, QslReport)> {
    check_grid(p.grid)?;
    let traj: Box<dyn Trajectory> = match p.study {
        TauAlphaStudy::Amplitude => Box::new(AmplitudeDampingTrajectory::new(
            &lambdas,
            DecayModel::constant(p.gamma)?,
            p.tau,
        )?),
        TauAlphaStudy::Dephasing => Box::new(dephasing_study_trajectory(lambdas, p.lambda20, p.gamma, p.tau)?),
        TauAlphaStudy::Unitary => return Err(invalid("the unitary study sweeps tau, not populations")),
    };
    let alpha = endpoint_alpha(traj.as_ref())?;
    Ok((alpha, tau_alpha(traj.as_ref(), alpha, p.grid)?))
}

/// Unframed bounds at one `τ` for `H_T` and `H_0 + H_1` from the ground state.
pub fn tau_alpha_unitary_point(p: &TauAlphaParams, tau: f64) -> Result<(QslReport, QslReport)> {
    check_grid(p.grid)?;
    let rho0 = DensityMatrix::basis_state(3, 0)?;
    let (ht, _) = h_optimal(p.e_m, p.mu)?;
    let one = AlphaValue::one(3)?;
    let a = tau_alpha(&UnitaryTrajectory::new(ht, rho0.clone(), tau)?, one, p.grid)?;
    let b = tau_alpha(
        &UnitaryTrajectory::new(h0_plus_h1(p.e_m, p.omega, p.mu)?, rho0, tau)?,
        one,
        p.grid,
    )?;
    Ok((a, b))
}

pub fn tau_alpha_study(p: &TauAlphaParams) -> Result<Table> {
    match p.study {
        TauAlphaStudy::Unitary => {
            let taus = p.taus.values()?;
            let rows: Vec<(QslReport, QslReport)> = taus
                .par_iter()
                .map(|&t| tau_alpha_unitary_point(p, t))
                .collect::<Result<_>>()?;
            let mut table = Table::new(
                "unitary unframed bound vs evolution time",
                &["tau", "ratio_opt", "ratio_h0h1"],
            );
            table.param("e_m", p.e_m);
            table.param("omega", p.omega);
            table.param("mu", p.mu);
            push_sweep(&mut table, "tau", p.taus);
            table.param("grid", p.grid);
            for (tau, (a, b)) in taus.iter().zip(&rows) {
                table.converged &= a.converged && b.converged;
                table.rows.push(vec![*tau, a.ratio, b.ratio]);
            }
            Ok(table)
        }
        study => {
            let points = population_points(p.lambda0, p.lambda1, p.lambda2, p.steps)?;
            let rows: Vec<(AlphaValue, QslReport)> = points
                .par_iter()
                .map(|l| tau_alpha_point(p, *l))
                .collect::<Result<_>>()?;
            let title = if study == TauAlphaStudy::Amplitude {
                "amplitude damping unframed bound vs populations"
            } else {
                "dephasing unframed bound vs populations"
            };
            let mut table = Table::new(title, &["lambda1", "lambda2", "alpha", "ratio"]);
            table.param("lambda0", p.lambda0);
            if study == TauAlphaStudy::Dephasing {
                match p.lambda20 {
                    Some(c) => table.param("lambda20", c),
                    None => table.param("lambda20", "sqrt(lambda0*lambda2)"),
                }
                let impure = points
                    .iter()
                    .filter(|l| {
                        dephasing_study_trajectory(**l, p.lambda20, p.gamma, p.tau)
                            .map(|t| (t.initial_state().purity() - 1.0).abs() > PURITY_WARN)
                            .unwrap_or(false)
                    })
                    .count();
                if impure > 0 {
                    table.warnings.push(format!(
                        "initial state is not pure (Tr rho0^2 != 1) at {impure} of {} points",
                        points.len()
                    ));
                }
            }
            table.param("gamma", p.gamma);
            table.param("tau", p.tau);
            table.param("steps", points.len());
            table.param("grid", p.grid);
            for (l, (a, r)) in points.iter().zip(&rows) {
                table.converged &= r.converged;
                table.rows.push(vec![l[1], l[2], a.value(), r.ratio]);
            }
            Ok(table)
        }
    }
}
