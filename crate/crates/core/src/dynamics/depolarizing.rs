use std::fmt;
use std::sync::Arc;

use super::{check_horizon, check_time, Trajectory, TrajectoryKind};
use crate::error::{Error, Result};
use crate::geometry::{check_frame, eigenframe};
use crate::linalg::{DensityMatrix, HermitianOperator, UnitaryMatrix};

/// Samples used to certify that a custom `p_t` is monotone.
const MONOTONE_SAMPLES: usize = 1024;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Weight `p_t` of the initial state, non-increasing with `p_0 = 1`.
#[derive(Clone)]
pub enum ProbabilitySchedule {
    /// `p_t = e^{-rate·t}`.
    Exponential { rate: f64 },
    /// User-supplied `p_t` with its derivative.
    Custom { p: ScalarFn, pdot: ScalarFn },
}

impl fmt::Debug for ProbabilitySchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exponential { rate } => write!(f, "Exponential {{ rate: {rate} }}"),
            Self::Custom { .. } => f.write_str("Custom"),
        }
    }
}

impl ProbabilitySchedule {
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::InvalidParameter(format!("rate {rate} must be non-negative")));
        }
        Ok(Self::Exponential { rate })
    }

    pub fn custom(
        p: impl Fn(f64) -> f64 + Send + Sync + 'static,
        pdot: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::Custom {
            p: Arc::new(p),
            pdot: Arc::new(pdot),
        }
    }

    pub fn p(&self, t: f64) -> f64 {
        match self {
            Self::Exponential { rate } => (-rate * t).exp(),
            Self::Custom { p, .. } => p(t),
        }
    }

    pub fn pdot(&self, t: f64) -> f64 {
        match self {
            Self::Exponential { rate } => -rate * (-rate * t).exp(),
            Self::Custom { pdot, .. } => pdot(t),
        }
    }

    fn validate(&self, tau: f64) -> Result<()> {
        if (self.p(0.0) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("p_0 = {}, expected 1", self.p(0.0))));
        }
        let mut prev = 1.0;
        for k in 0..=MONOTONE_SAMPLES {
            let t = tau * k as f64 / MONOTONE_SAMPLES as f64;
            let p = self.p(t);
            if !(p.is_finite() && p > 0.0 && p <= 1.0 + 1e-12) {
                return Err(Error::InvalidParameter(format!("p_t = {p} outside (0, 1] at t = {t}")));
            }
            if p > prev + 1e-14 {
                return Err(Error::InvalidParameter(format!("p_t is not monotone near t = {t}")));
            }
            prev = p;
        }
        Ok(())
    }
}

/// `ρ_t = p_t ρ_0 + (1 - p_t) I/N`.
#[derive(Clone, Debug)]
pub struct DepolarizingTrajectory {
    rho0: DensityMatrix,
    frame0: UnitaryMatrix,
    schedule: ProbabilitySchedule,
    tau: f64,
}

impl DepolarizingTrajectory {
    pub fn new(rho0: DensityMatrix, schedule: ProbabilitySchedule, tau: f64) -> Result<Self> {
        check_horizon(tau)?;
        schedule.validate(tau)?;
        let frame0 = eigenframe(&rho0)?;
        Ok(Self {
            rho0,
            frame0,
            schedule,
            tau,
        })
    }

    pub fn with_frame(mut self, frame0: UnitaryMatrix) -> Result<Self> {
        check_frame(&self.rho0, &frame0)?;
        self.frame0 = frame0;
        Ok(self)
    }

    pub fn schedule(&self) -> &ProbabilitySchedule {
        &self.schedule
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.rho0
    }
}

impl Trajectory for DepolarizingTrajectory {
    fn dim(&self) -> usize {
        self.rho0.dim()
    }

    fn horizon(&self) -> f64 {
        self.tau
    }

    fn kind(&self) -> TrajectoryKind {
        TrajectoryKind::Depolarizing
    }

    fn state(&self, t: f64) -> Result<DensityMatrix> {
        check_time(t, self.tau)?;
        let p = self.schedule.p(t);
        let n = self.dim() as f64;
        Ok(DensityMatrix::from_matrix_unchecked(
            self.rho0.matrix().scale_real(p).add_identity((1.0 - p) / n),
        ))
    }

    fn derivative(&self, t: f64) -> Result<HermitianOperator> {
        check_time(t, self.tau)?;
        let n = self.dim() as f64;
        let pd = self.schedule.pdot(t);
        Ok(HermitianOperator::from_matrix_unchecked(
            self.rho0.matrix().add_identity(-1.0 / n).scale_real(pd),
        ))
    }

    fn frame(&self, _t: f64) -> Option<UnitaryMatrix> {
        Some(self.frame0.clone())
    }
}
