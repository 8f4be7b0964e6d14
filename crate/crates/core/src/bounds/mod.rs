//! Speed-limit bounds: the unframed `τ_α`, the framed `τ_QSL`, the
//! closed-system specialization and the saturating constructions.

mod average;
mod closed;
mod path;
mod report;
mod speed;
mod theorem;

pub use average::{average_from, average_over, time_average, Average, DEFAULT_AVERAGE_TOL, MAX_INTERVALS};
pub use closed::{
    orthogonal_reference_distance, saturating_hamiltonian, saturating_hamiltonian_in_frame, saturating_initial_state,
    tau_qsl_closed, tau_qsl_closed_for, tau_qsl_orthogonal, EnergySpec, OrthogonalReport, SaturatingState,
};
pub use report::QslReport;
pub use speed::{energy_variance, speed_alpha};
pub use theorem::{tau_alpha, tau_qsl, tau_qsl_detailed, FramedQsl, MIN_GRID};

#[cfg(test)]
mod tests;
