use super::{check_horizon, check_time, Trajectory, TrajectoryKind};
use crate::error::{Error, Result};
use crate::geometry::{check_frame, eigenframe};
use crate::linalg::{Complex64, DensityMatrix, HermitianOperator, Propagator, UnitaryMatrix};

/// `ρ_t = U_t ρ_0 U_t†` under a piecewise-constant Hamiltonian schedule.
#[derive(Clone, Debug)]
pub struct UnitaryTrajectory {
    rho0: DensityMatrix,
    frame0: UnitaryMatrix,
    tau: f64,
    segments: Vec<Segment>,
}

#[derive(Clone, Debug)]
struct Segment {
    h: HermitianOperator,
    start: f64,
    propagator: Propagator,
    /// Accumulated propagator at `start`.
    before: UnitaryMatrix,
}

impl UnitaryTrajectory {
    /// Single time-independent Hamiltonian.
    pub fn new(h: HermitianOperator, rho0: DensityMatrix, tau: f64) -> Result<Self> {
        Self::from_schedule(vec![(h, tau)], rho0, tau)
    }

    /// Hamiltonians applied in order for the given durations, which must
    /// cover `[0, τ]`; the last one is extended if needed by roundoff.
    pub fn from_schedule(schedule: Vec<(HermitianOperator, f64)>, rho0: DensityMatrix, tau: f64) -> Result<Self> {
        check_horizon(tau)?;
        if schedule.is_empty() {
            return Err(Error::InvalidParameter("empty Hamiltonian schedule".into()));
        }
        let n = rho0.dim();
        let total: f64 = schedule.iter().map(|(_, d)| d).sum();
        if total < tau * (1.0 - 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "schedule covers {total}, shorter than horizon {tau}"
            )));
        }
        let mut segments = Vec::with_capacity(schedule.len());
        let mut start = 0.0;
        let mut before = UnitaryMatrix::identity(n);
        for (h, duration) in schedule {
            if h.dim() != n {
                return Err(Error::DimensionMismatch(n, h.dim()));
            }
            if !(duration.is_finite() && duration > 0.0) {
                return Err(Error::InvalidParameter(format!("segment duration {duration}")));
            }
            let propagator = Propagator::new(&h)?;
            let next = propagator.at(duration).compose(&before);
            segments.push(Segment {
                h,
                start,
                propagator,
                before,
            });
            before = next;
            start += duration;
            if start >= tau {
                break;
            }
        }
        let frame0 = eigenframe(&rho0)?;
        Ok(Self {
            rho0,
            frame0,
            tau,
            segments,
        })
    }

    /// Replaces the initial eigenframe `Φ_0` (must diagonalize `ρ_0`).
    pub fn with_frame(mut self, frame0: UnitaryMatrix) -> Result<Self> {
        check_frame(&self.rho0, &frame0)?;
        self.frame0 = frame0;
        Ok(self)
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn initial_frame(&self) -> &UnitaryMatrix {
        &self.frame0
    }

    fn segment(&self, t: f64) -> &Segment {
        let idx = self.segments.partition_point(|s| s.start <= t).max(1) - 1;
        &self.segments[idx]
    }

    /// `U_t`.
    pub fn propagator_at(&self, t: f64) -> Result<UnitaryMatrix> {
        check_time(t, self.tau)?;
        let s = self.segment(t);
        Ok(s.propagator.at(t - s.start).compose(&s.before))
    }

    /// `(start, end, H)` of each segment, clipped to `[0, τ]`.
    pub fn segments(&self) -> Vec<(f64, f64, &HermitianOperator)> {
        let mut out = Vec::with_capacity(self.segments.len());
        for (k, s) in self.segments.iter().enumerate() {
            let end = self.segments.get(k + 1).map_or(self.tau, |n| n.start.min(self.tau));
            out.push((s.start, end, &s.h));
        }
        out
    }

    /// Hamiltonian active at `t`.
    pub fn hamiltonian_at(&self, t: f64) -> Result<&HermitianOperator> {
        check_time(t, self.tau)?;
        Ok(&self.segment(t).h)
    }
}

impl Trajectory for UnitaryTrajectory {
    fn dim(&self) -> usize {
        self.rho0.dim()
    }

    fn horizon(&self) -> f64 {
        self.tau
    }

    fn kind(&self) -> TrajectoryKind {
        TrajectoryKind::Unitary
    }

    fn state(&self, t: f64) -> Result<DensityMatrix> {
        Ok(self.propagator_at(t)?.conjugate_state(&self.rho0))
    }

    fn derivative(&self, t: f64) -> Result<HermitianOperator> {
        let rho = self.state(t)?;
        let h = self.hamiltonian_at(t)?;
        let c = h.commutator(rho.matrix()).scale(Complex64::new(0.0, -1.0));
        Ok(HermitianOperator::from_matrix_unchecked(c))
    }

    fn frame(&self, t: f64) -> Option<UnitaryMatrix> {
        self.propagator_at(t).ok().map(|u| u.compose(&self.frame0))
    }
}
