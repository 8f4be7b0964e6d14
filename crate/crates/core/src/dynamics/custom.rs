use std::fmt;
use std::sync::Arc;

use super::{check_horizon, check_time, Trajectory, TrajectoryKind};
use crate::error::Result;
use crate::linalg::{check_dim, DensityMatrix, HermitianOperator, UnitaryMatrix};

type StateFn = Arc<dyn Fn(f64) -> Result<DensityMatrix> + Send + Sync>;
type DerivFn = Arc<dyn Fn(f64) -> Result<HermitianOperator> + Send + Sync>;
type FrameFn = Arc<dyn Fn(f64) -> Option<UnitaryMatrix> + Send + Sync>;

/// Trajectory defined by closures.
#[derive(Clone)]
pub struct CustomTrajectory {
    dim: usize,
    tau: f64,
    state: StateFn,
    derivative: DerivFn,
    frame: Option<FrameFn>,
}

impl fmt::Debug for CustomTrajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomTrajectory")
            .field("dim", &self.dim)
            .field("tau", &self.tau)
            .field("declares_frame", &self.frame.is_some())
            .finish()
    }
}

impl CustomTrajectory {
    pub fn new(
        dim: usize,
        tau: f64,
        state: impl Fn(f64) -> Result<DensityMatrix> + Send + Sync + 'static,
        derivative: impl Fn(f64) -> Result<HermitianOperator> + Send + Sync + 'static,
    ) -> Result<Self> {
        check_dim(dim)?;
        check_horizon(tau)?;
        Ok(Self {
            dim,
            tau,
            state: Arc::new(state),
            derivative: Arc::new(derivative),
            frame: None,
        })
    }

    pub fn with_frame(mut self, frame: impl Fn(f64) -> Option<UnitaryMatrix> + Send + Sync + 'static) -> Self {
        self.frame = Some(Arc::new(frame));
        self
    }
}

impl Trajectory for CustomTrajectory {
    fn dim(&self) -> usize {
        self.dim
    }

    fn horizon(&self) -> f64 {
        self.tau
    }

    fn kind(&self) -> TrajectoryKind {
        TrajectoryKind::Custom
    }

    fn state(&self, t: f64) -> Result<DensityMatrix> {
        check_time(t, self.tau)?;
        (self.state)(t)
    }

    fn derivative(&self, t: f64) -> Result<HermitianOperator> {
        check_time(t, self.tau)?;
        (self.derivative)(t)
    }

    fn frame(&self, t: f64) -> Option<UnitaryMatrix> {
        self.frame.as_ref().and_then(|f| f(t))
    }
}
