use std::collections::BTreeMap;

use super::{check_horizon, check_time, Trajectory, TrajectoryKind};
use crate::error::{Error, Result};
use crate::linalg::{check_dim, Complex64, ComplexMatrix, DensityMatrix, HermitianOperator, UnitaryMatrix};

/// Fixed populations with every coherence multiplied by `e^{-γt}`.
#[derive(Clone, Debug)]
pub struct DephasingTrajectory {
    rho0: DensityMatrix,
    gamma: f64,
    tau: f64,
    diagonal_only: bool,
}

impl DephasingTrajectory {
    /// `coherences` holds the upper-triangular entries `(i, j)`, `i < j`.
    pub fn new(diag: &[f64], coherences: &BTreeMap<(usize, usize), Complex64>, gamma: f64, tau: f64) -> Result<Self> {
        let n = diag.len();
        check_dim(n)?;
        check_horizon(tau)?;
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dephasing rate {gamma} must be positive"
            )));
        }
        let mut m = ComplexMatrix::from_real_diagonal(diag);
        for (&(i, j), &c) in coherences {
            if i >= j || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "coherence index ({i}, {j}) must satisfy i < j < {n}"
                )));
            }
            m[(i, j)] = c;
            m[(j, i)] = c.conj();
        }
        let rho0 = DensityMatrix::new(m)?;
        let diagonal_only = coherences.values().all(|c| c.norm() == 0.0);
        Ok(Self {
            rho0,
            gamma,
            tau,
            diagonal_only,
        })
    }

    pub fn from_state(rho0: DensityMatrix, gamma: f64, tau: f64) -> Result<Self> {
        let n = rho0.dim();
        let diag: Vec<f64> = (0..n).map(|i| rho0[(i, i)].re).collect();
        let mut coh = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                coh.insert((i, j), rho0[(i, j)]);
            }
        }
        Self::new(&diag, &coh, gamma, tau)
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.rho0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn scaled_offdiag(&self, c: f64) -> ComplexMatrix {
        let m = self.rho0.matrix();
        ComplexMatrix::from_fn(m.dim(), |i, j| if i == j { m[(i, j)] } else { m[(i, j)] * c })
    }
}

impl Trajectory for DephasingTrajectory {
    fn dim(&self) -> usize {
        self.rho0.dim()
    }

    fn horizon(&self) -> f64 {
        self.tau
    }

    fn kind(&self) -> TrajectoryKind {
        TrajectoryKind::Dephasing
    }

    fn state(&self, t: f64) -> Result<DensityMatrix> {
        check_time(t, self.tau)?;
        Ok(DensityMatrix::from_matrix_unchecked(
            self.scaled_offdiag((-self.gamma * t).exp()),
        ))
    }

    fn derivative(&self, t: f64) -> Result<HermitianOperator> {
        check_time(t, self.tau)?;
        let rate = -self.gamma * (-self.gamma * t).exp();
        let m = self.rho0.matrix();
        Ok(HermitianOperator::from_matrix_unchecked(ComplexMatrix::from_fn(
            m.dim(),
            |i, j| {
                if i == j {
                    Complex64::new(0.0, 0.0)
                } else {
                    m[(i, j)] * rate
                }
            },
        )))
    }

    fn frame(&self, _t: f64) -> Option<UnitaryMatrix> {
        self.diagonal_only.then(|| UnitaryMatrix::identity(self.dim()))
    }
}
