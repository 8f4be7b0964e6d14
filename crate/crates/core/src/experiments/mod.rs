//! Parameter sweeps behind the command-line studies, the matrix file
//! format and the CSV/SVG writers.

pub mod matrix_io;
mod queries;
mod studies;
mod svg;
mod table;

pub use queries::{distance_report, read_state_pair, verify_all, DistanceReport};
pub use studies::{
    dephasing_study_trajectory, endpoint_alpha, fig1, fig1_point, fig2, fig2_point, h0, h0_plus_h1, h_optimal,
    nonmarkov, nonmarkov_point, tau_alpha_point, tau_alpha_study, tau_alpha_unitary_point, three_level_populations,
    Fig1Params, Fig2Params, NonMarkovParams, Sweep, TauAlphaParams, TauAlphaStudy, DEFAULT_TAUS,
};
pub use svg::render as render_svg;
pub use table::Table;
