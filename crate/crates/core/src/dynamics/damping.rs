use super::decay::{decay_rate, gamma_integral, DecayModel};
use super::{check_horizon, check_time, Trajectory, TrajectoryKind};
use crate::error::{Error, Result};
use crate::linalg::{check_dim, ComplexMatrix, DensityMatrix, HermitianOperator, UnitaryMatrix};

const SIMPLEX_TOL: f64 = 1e-10;

/// Amplitude damping of a diagonal state towards level 0:
/// excited populations scale by `e^{-Γ_t}` and the ground level absorbs the
/// difference.
#[derive(Clone, Debug)]
pub struct AmplitudeDampingTrajectory {
    lambdas: Vec<f64>,
    decay: DecayModel,
    tau: f64,
}

impl AmplitudeDampingTrajectory {
    pub fn new(lambdas: &[f64], decay: DecayModel, tau: f64) -> Result<Self> {
        check_dim(lambdas.len())?;
        check_horizon(tau)?;
        check_probability_vector(lambdas)?;
        Ok(Self {
            lambdas: lambdas.to_vec(),
            decay,
            tau,
        })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn decay(&self) -> DecayModel {
        self.decay
    }

    /// Surviving excited fraction `e^{-Γ_t}`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        check_time(t, self.tau)?;
        Ok((-gamma_integral(self.decay, t)?).exp())
    }

    fn excited(&self) -> f64 {
        self.lambdas[1..].iter().sum()
    }
}

pub(crate) fn check_probability_vector(p: &[f64]) -> Result<()> {
    if let Some(bad) = p.iter().find(|x| !(x.is_finite() && **x >= -SIMPLEX_TOL)) {
        return Err(Error::InvalidParameter(format!(
            "population {bad} is not a probability"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::InvalidParameter(format!(
            "populations sum to {total}, expected 1"
        )));
    }
    Ok(())
}

impl Trajectory for AmplitudeDampingTrajectory {
    fn dim(&self) -> usize {
        self.lambdas.len()
    }

    fn horizon(&self) -> f64 {
        self.tau
    }

    fn kind(&self) -> TrajectoryKind {
        TrajectoryKind::AmplitudeDamping
    }

    fn state(&self, t: f64) -> Result<DensityMatrix> {
        let q = self.survival(t)?;
        let mut diag: Vec<f64> = self.lambdas.iter().map(|l| (l * q).max(0.0)).collect();
        diag[0] = 1.0 - q * self.excited();
        Ok(DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_real_diagonal(
            &diag,
        )))
    }

    fn derivative(&self, t: f64) -> Result<HermitianOperator> {
        let q = self.survival(t)?;
        let rate = decay_rate(self.decay, t)?;
        let mut diag: Vec<f64> = self.lambdas.iter().map(|l| -rate * q * l).collect();
        diag[0] = rate * q * self.excited();
        Ok(HermitianOperator::from_matrix_unchecked(
            ComplexMatrix::from_real_diagonal(&diag),
        ))
    }

    fn frame(&self, _t: f64) -> Option<UnitaryMatrix> {
        Some(UnitaryMatrix::identity(self.dim()))
    }
}
