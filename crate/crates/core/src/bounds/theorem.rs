use rayon::prelude::*;

use super::path::refine_path;
use super::report::QslReport;
use crate::dynamics::{align_frame, track_frame_from, uniform_grid, Trajectory};
use crate::error::{Error, Result};
use crate::geometry::{
    default_alphas_for, ordered_pairs, pair_distances, unit_angle, unit_image, AlphaAssignment, AlphaValue,
    ProjectiveFamily,
};
use crate::linalg::{fourier_unitary, ComplexMatrix, UnitaryMatrix};

/// Smallest accepted number of grid points.
pub const MIN_GRID: usize = 65;
/// Endpoint distances below this count as zero when the path is empty.
const ZERO_DISTANCE: f64 = 1e-12;

fn check_grid(grid: usize) -> Result<()> {
    if grid < MIN_GRID {
        return Err(Error::InvalidParameter(format!(
            "grid of {grid} points, need at least {MIN_GRID}"
        )));
    }
    Ok(())
}

/// Time bound from the unframed distance `D_α`: endpoint distance over the
/// mean speed, with the path length measured by angular steps.
pub fn tau_alpha(traj: &dyn Trajectory, alpha: AlphaValue, grid: usize) -> Result<QslReport> {
    check_grid(grid)?;
    let n = traj.dim();
    if alpha.dim() != n {
        return Err(Error::DimensionMismatch(n, alpha.dim()));
    }
    let tau = traj.horizon();
    let a = alpha.value();
    let image = |t: f64| -> Result<ComplexMatrix> { Ok(unit_image(traj.state(t)?.matrix(), a)) };
    let initial: Vec<ComplexMatrix> = uniform_grid(tau, grid)
        .into_par_iter()
        .map(image)
        .collect::<Result<_>>()?;
    let distance = unit_angle(&initial[0], initial.last().expect("grid is non-empty"));
    let path = refine_path(tau, initial, |t, _| image(t), |x, y| vec![unit_angle(x, y)])?;
    let length = path.lengths[0];
    if length == 0.0 && distance > ZERO_DISTANCE {
        return Err(Error::InconsistentTrajectory(format!(
            "endpoint distance {distance:e} with zero path length"
        )));
    }
    Ok(QslReport::from_totals(
        distance,
        length,
        tau,
        path.intervals + 1,
        path.converged,
        path.refinements,
    ))
}

/// Framed bound with its per-pair ingredients.
#[derive(Clone, Debug)]
pub struct FramedQsl {
    pub report: QslReport,
    pub alphas: AlphaAssignment,
    /// Endpoint distances per ordered pair, ascending pair order.
    pub pair_distances: Vec<f64>,
    /// Path lengths per ordered pair, ascending pair order.
    pub pair_lengths: Vec<f64>,
}

struct FramedSample {
    frame: UnitaryMatrix,
    images: Vec<ComplexMatrix>,
}

/// Time bound from the framed distance `D̄`, with frames tracked along the
/// trajectory and `α` defaulting to the larger endpoint pair purity.
pub fn tau_qsl(traj: &dyn Trajectory, grid: usize, alphas: Option<&AlphaAssignment>) -> Result<QslReport> {
    Ok(tau_qsl_detailed(traj, grid, alphas, None, None)?.report)
}

/// [`tau_qsl`] with explicit control of the pair basis and initial frame.
///
/// `inner` replaces the Fourier matrix between the eigenframe and the pair
/// projectors (default: Fourier). `initial_frame` forces generic tracking
/// from the given `Φ_0` even when the trajectory declares frames.
pub fn tau_qsl_detailed(
    traj: &dyn Trajectory,
    grid: usize,
    alphas: Option<&AlphaAssignment>,
    inner: Option<&UnitaryMatrix>,
    initial_frame: Option<&UnitaryMatrix>,
) -> Result<FramedQsl> {
    check_grid(grid)?;
    let n = traj.dim();
    let tau = traj.horizon();
    let fourier;
    let inner = match inner {
        Some(w) => w,
        None => {
            fourier = fourier_unitary(n)?;
            &fourier
        }
    };
    let declared = initial_frame.is_none() && traj.frame(0.0).is_some();
    let times = uniform_grid(tau, grid);
    let frames = track_frame_from(traj, &times, initial_frame)?;

    let family = |t: f64, frame: &UnitaryMatrix| -> Result<ProjectiveFamily> {
        ProjectiveFamily::with_inner(&traj.state(t)?, Some(frame), inner)
    };
    let fam0 = family(0.0, &frames[0])?;
    let famtau = family(tau, frames.last().expect("grid is non-empty"))?;
    let alphas = match alphas {
        Some(a) => {
            if a.dim() != n {
                return Err(Error::DimensionMismatch(n, a.dim()));
            }
            a.clone()
        }
        None => default_alphas_for(&fam0, &famtau)?,
    };
    let numerators = pair_distances(&fam0, &famtau, &alphas)?;
    let pairs: Vec<(usize, usize)> = ordered_pairs(n).collect();

    let sample = |t: f64, frame: UnitaryMatrix| -> Result<FramedSample> {
        let fam = family(t, &frame)?;
        let images = pairs
            .iter()
            .map(|&(i, j)| unit_image(fam.pair(i, j).matrix(), alphas.get(i, j).value()))
            .collect();
        Ok(FramedSample { frame, images })
    };
    let initial: Vec<FramedSample> = times
        .into_par_iter()
        .zip(frames)
        .map(|(t, f)| sample(t, f))
        .collect::<Result<_>>()?;
    let midpoint = |t: f64, left: &FramedSample| -> Result<FramedSample> {
        let frame = if declared {
            traj.frame(t)
                .ok_or_else(|| Error::InconsistentTrajectory(format!("frame undeclared at t = {t}")))?
        } else {
            align_frame(&left.frame, &traj.state(t)?, t)?
        };
        sample(t, frame)
    };
    let step = |a: &FramedSample, b: &FramedSample| -> Vec<f64> {
        a.images.iter().zip(&b.images).map(|(x, y)| unit_angle(x, y)).collect()
    };
    let path = refine_path(tau, initial, midpoint, step)?;
    let distance: f64 = numerators.iter().sum();
    let length: f64 = path.lengths.iter().sum();
    if length == 0.0 && distance > ZERO_DISTANCE {
        return Err(Error::InconsistentTrajectory(format!(
            "framed endpoint distance {distance:e} with zero path length"
        )));
    }
    Ok(FramedQsl {
        report: QslReport::from_totals(
            distance,
            length,
            tau,
            path.intervals + 1,
            path.converged,
            path.refinements,
        ),
        alphas,
        pair_distances: numerators,
        pair_lengths: path.lengths,
    })
}
