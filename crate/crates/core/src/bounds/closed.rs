use std::f64::consts::{PI, SQRT_2};

use super::average::{average_from, DEFAULT_AVERAGE_TOL};
use super::report::QslReport;
use super::speed::energy_variance;
use super::theorem::MIN_GRID;
use crate::dynamics::{Trajectory, UnitaryTrajectory};
use crate::error::{Error, Result};
use crate::geometry::{eigenframe, ordered_pairs, permuted_distance, unit_angle, unit_image, ProjectiveFamily};
use crate::linalg::{
    check_dim, eig_hermitian, fourier_unitary, permutation_unitary, ComplexMatrix, DensityMatrix, HermitianOperator,
    UnitaryMatrix,
};

/// Pairs whose purity exceeds `1/N` by less than this carry no motion.
const DEGENERATE_PAIR: f64 = 1e-12;
/// Minimum separation between energies of an [`EnergySpec`].
const ENERGY_SEPARATION: f64 = 1e-12;
/// Largest `Tr ρ_0 ρ_τ` accepted as orthogonal.
const ORTHOGONALITY_TOL: f64 = 1e-6;

/// Energies `E_0, …, E_{N-1}` of a saturating Hamiltonian; pairwise distinct.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergySpec {
    energies: Vec<f64>,
}

impl EnergySpec {
    pub fn new(energies: &[f64]) -> Result<Self> {
        check_dim(energies.len())?;
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter(format!("energy {e} is not finite")));
        }
        for (a, ea) in energies.iter().enumerate() {
            for eb in &energies[a + 1..] {
                if (ea - eb).abs() <= ENERGY_SEPARATION {
                    return Err(Error::InvalidParameter(format!("repeated energy {ea}")));
                }
            }
        }
        Ok(Self {
            energies: energies.to_vec(),
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `max |E_i - E_j|`; evolution times up to `π` over this gap saturate.
    pub fn max_gap(&self) -> f64 {
        let max = self.energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.energies.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }
}

/// `H = Σ_i E_i Φ U^F|i⟩⟨i|U^F† Φ†` for a given frame `Φ`.
pub fn saturating_hamiltonian_in_frame(frame: &UnitaryMatrix, spec: &EnergySpec) -> Result<HermitianOperator> {
    let n = frame.dim();
    if spec.energies.len() != n {
        return Err(Error::DimensionMismatch(n, spec.energies.len()));
    }
    let w = frame.compose(&fourier_unitary(n)?);
    Ok(HermitianOperator::from_matrix_unchecked(
        w.conjugate(&ComplexMatrix::from_real_diagonal(&spec.energies)),
    ))
}

/// Saturating Hamiltonian for `ρ_0`, built on the solver's eigenframe (the
/// frame [`UnitaryTrajectory`] assumes by default).
pub fn saturating_hamiltonian(rho0: &DensityMatrix, spec: &EnergySpec) -> Result<HermitianOperator> {
    saturating_hamiltonian_in_frame(&eigenframe(rho0)?, spec)
}

/// An initial state together with the eigenframe its saturation relies on.
#[derive(Clone, Debug)]
pub struct SaturatingState {
    pub state: DensityMatrix,
    pub frame: UnitaryMatrix,
}

/// State `ρ̃_0 = Ψ U^F Λ_0 U^F† Ψ†` whose pair bases diagonalize `H = Ψ Λ_E Ψ†`.
///
/// The frame `Ψ U^F` must be handed to the trajectory (see
/// [`UnitaryTrajectory::with_frame`]): the solver's own eigenframe of `ρ̃_0`
/// generally differs from it.
pub fn saturating_initial_state(h: &HermitianOperator, lambda0: &[f64]) -> Result<SaturatingState> {
    let n = h.dim();
    if lambda0.len() != n {
        return Err(Error::DimensionMismatch(n, lambda0.len()));
    }
    crate::dynamics::check_probability_vector(lambda0)?;
    let psi = eig_hermitian(h)?.vectors;
    let frame = psi.compose(&fourier_unitary(n)?);
    let state = DensityMatrix::new(frame.conjugate(&ComplexMatrix::from_real_diagonal(lambda0)))?;
    Ok(SaturatingState { state, frame })
}

/// Closed-system bound with per-pair speeds `√2 ΔE([ρ_t]_ij)/√(Tr[ρ_0]²_ij - 1/N)`.
pub fn tau_qsl_closed(
    schedule: Vec<(HermitianOperator, f64)>,
    rho0: &DensityMatrix,
    tau: f64,
    grid: usize,
) -> Result<QslReport> {
    let traj = UnitaryTrajectory::from_schedule(schedule, rho0.clone(), tau)?;
    tau_qsl_closed_for(&traj, grid, None)
}

/// [`tau_qsl_closed`] on a prepared trajectory (its initial frame is used);
/// `inner` replaces the Fourier matrix in the pair basis.
pub fn tau_qsl_closed_for(traj: &UnitaryTrajectory, grid: usize, inner: Option<&UnitaryMatrix>) -> Result<QslReport> {
    if grid < MIN_GRID {
        return Err(Error::InvalidParameter(format!(
            "grid of {grid} points, need at least {MIN_GRID}"
        )));
    }
    let n = traj.dim();
    let nf = n as f64;
    let tau = traj.horizon();
    let fourier;
    let inner = match inner {
        Some(w) => w,
        None => {
            fourier = fourier_unitary(n)?;
            &fourier
        }
    };
    let fam0 = ProjectiveFamily::with_inner(traj.initial_state(), Some(traj.initial_frame()), inner)?;
    let u_tau = traj.propagator_at(tau)?;
    let segments = traj.segments();

    let mut distance = 0.0;
    let mut speed = 0.0;
    let mut active = 0;
    let mut max_intervals = 0;
    let mut converged = true;
    for (i, j) in ordered_pairs(n) {
        let pair0 = fam0.pair(i, j);
        let purity = pair0.purity();
        if purity <= 1.0 / nf + DEGENERATE_PAIR {
            continue;
        }
        active += 1;
        let alpha = purity.min(1.0);
        let end = u_tau.conjugate(pair0.matrix());
        distance += unit_angle(&unit_image(pair0.matrix(), alpha), &unit_image(&end, alpha));

        let mut mean_de = 0.0;
        for &(start, stop, h) in &segments {
            let de = |t: f64| -> Result<f64> {
                let moved = traj.propagator_at(t)?.conjugate_state(pair0);
                energy_variance(h, &moved)
            };
            let avg = average_from(de, start, stop, DEFAULT_AVERAGE_TOL, grid - 1)?;
            mean_de += avg.value * (stop - start) / tau;
            max_intervals = max_intervals.max(avg.intervals);
            converged &= avg.converged;
        }
        speed += SQRT_2 * mean_de / (purity - 1.0 / nf).sqrt();
    }
    if active == 0 {
        return Err(Error::UndefinedBound(
            "every projective matrix is maximally mixed".into(),
        ));
    }
    let refinements = (max_intervals as f64 / (grid - 1) as f64).log2().round().max(0.0) as usize;
    Ok(QslReport::from_totals(
        distance,
        speed * tau,
        tau,
        max_intervals + 1,
        converged,
        refinements,
    ))
}

/// `(2π/3)(N - 1)(N² - 1)`: the published closed form for the maximal framed
/// distance between orthogonal pure states. It agrees with principal-branch
/// angles only for `N = 2`.
pub fn orthogonal_reference_distance(n: usize) -> Result<f64> {
    check_dim(n)?;
    let nf = n as f64;
    Ok(2.0 * PI / 3.0 * (nf - 1.0) * (nf * nf - 1.0))
}

/// Closed-system bound between orthogonal pure states using the
/// permutation-maximized distance.
#[derive(Clone, Debug)]
pub struct OrthogonalReport {
    pub report: QslReport,
    /// Eigen-index permutation attaining the maximal distance.
    pub permutation: Vec<usize>,
    /// [`orthogonal_reference_distance`] for comparison with `report.distance`.
    pub reference_distance: f64,
}

pub fn tau_qsl_orthogonal(
    schedule: Vec<(HermitianOperator, f64)>,
    rho0: &DensityMatrix,
    tau: f64,
    grid: usize,
) -> Result<OrthogonalReport> {
    if (rho0.purity() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "initial state must be pure (purity {})",
            rho0.purity()
        )));
    }
    let traj = UnitaryTrajectory::from_schedule(schedule, rho0.clone(), tau)?;
    let end = traj.state(tau)?;
    let overlap = rho0.hs_dot(&end).re;
    if overlap > ORTHOGONALITY_TOL {
        return Err(Error::InvalidParameter(format!(
            "endpoint not orthogonal to the initial state (overlap {overlap:e})"
        )));
    }
    let n = rho0.dim();
    let frame_tau = traj.frame(tau).expect("unitary trajectories declare frames");
    let best = permuted_distance(rho0, &end, (Some(traj.initial_frame()), Some(&frame_tau)), None)?;
    let inner = permutation_unitary(&best.permutation)?.compose(&fourier_unitary(n)?);
    let mut report = tau_qsl_closed_for(&traj, grid, Some(&inner))?;
    if (report.distance - best.distance).abs() > 1e-9 * best.distance.max(1.0) {
        return Err(Error::InconsistentTrajectory(format!(
            "permuted distance {} differs from closed-form numerator {}",
            best.distance, report.distance
        )));
    }
    report.distance = best.distance;
    Ok(OrthogonalReport {
        report,
        permutation: best.permutation,
        reference_distance: orthogonal_reference_distance(n)?,
    })
}
