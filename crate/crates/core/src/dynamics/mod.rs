//! Analytic trajectories `ρ_t` on `[0, τ]` with their time derivatives and,
//! where known in closed form, a continuous eigenframe.

mod custom;
mod damping;
mod decay;
mod dephasing;
mod depolarizing;
mod tracking;
mod unitary;

pub use custom::CustomTrajectory;
pub(crate) use damping::check_probability_vector;
pub use damping::AmplitudeDampingTrajectory;
pub use decay::{decay_rate, gamma_integral, DecayModel};
pub use dephasing::DephasingTrajectory;
pub use depolarizing::{DepolarizingTrajectory, ProbabilitySchedule};
pub(crate) use tracking::align_frame;
pub use tracking::{track_frame, track_frame_from, uniform_grid};
pub use unitary::UnitaryTrajectory;

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, HermitianOperator, UnitaryMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrajectoryKind {
    Unitary,
    Depolarizing,
    AmplitudeDamping,
    Dephasing,
    Custom,
}

impl fmt::Display for TrajectoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Unitary => "unitary",
            Self::Depolarizing => "depolarizing",
            Self::AmplitudeDamping => "amplitude_damping",
            Self::Dephasing => "dephasing",
            Self::Custom => "custom",
        })
    }
}

/// A family of states `ρ_t`, `t ∈ [0, τ]`.
pub trait Trajectory: Send + Sync {
    fn dim(&self) -> usize;

    /// The horizon `τ > 0`.
    fn horizon(&self) -> f64;

    fn kind(&self) -> TrajectoryKind;

    fn state(&self, t: f64) -> Result<DensityMatrix>;

    /// `dρ/dt`, traceless.
    fn derivative(&self, t: f64) -> Result<HermitianOperator>;

    /// Declared eigenframe `Φ_t` (continuous in `t`), if known analytically.
    fn frame(&self, _t: f64) -> Option<UnitaryMatrix> {
        None
    }
}

/// Horizons must be positive and finite.
pub(crate) fn check_horizon(tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidParameter(format!("horizon {tau} must be positive")));
    }
    Ok(())
}

/// Accepts `t ∈ [0, τ]` with roundoff slack at the right end.
pub(crate) fn check_time(t: f64, tau: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0 && t <= tau * (1.0 + 1e-12) + 1e-15) {
        return Err(Error::InvalidParameter(format!("time {t} outside [0, {tau}]")));
    }
    Ok(())
}
