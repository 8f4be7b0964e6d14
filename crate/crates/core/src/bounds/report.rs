use std::fmt;

/// Outcome of a speed-limit evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct QslReport {
    /// The lower bound on the evolution time.
    pub bound: f64,
    pub actual_tau: f64,
    /// `bound / actual_tau`, at most 1 for a valid bound.
    pub ratio: f64,
    /// Endpoint distance (radians).
    pub distance: f64,
    /// Mean speed along the trajectory (radians per unit time).
    pub mean_speed: f64,
    pub grid_points: usize,
    pub converged: bool,
    pub refinements: usize,
}

impl QslReport {
    pub(crate) fn from_totals(
        distance: f64,
        path: f64,
        tau: f64,
        grid_points: usize,
        converged: bool,
        refinements: usize,
    ) -> Self {
        let bound = if path > 0.0 { tau * distance / path } else { 0.0 };
        Self {
            bound,
            actual_tau: tau,
            ratio: bound / tau,
            distance,
            mean_speed: path / tau,
            grid_points,
            converged,
            refinements,
        }
    }
}

impl fmt::Display for QslReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bound={:.12e} tau={:.12e} ratio={:.12e} distance={:.12e} mean_speed={:.12e} grid_points={} converged={} refinements={}",
            self.bound,
            self.actual_tau,
            self.ratio,
            self.distance,
            self.mean_speed,
            self.grid_points,
            self.converged,
            self.refinements
        )
    }
}
