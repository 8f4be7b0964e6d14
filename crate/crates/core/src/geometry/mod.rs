//! The `F_α` embedding, the angular distance `D_α` and the framed distances
//! built from projective matrices.

mod alpha;
mod distance;
mod framed;
mod projective;

pub use alpha::{AlphaAssignment, AlphaValue};
pub use distance::{distance_alpha, f_map};
pub(crate) use distance::{f_map_raw, unit_angle, unit_image};
pub use framed::{
    default_alphas, default_alphas_for, framed_distance, framed_distance_families, pair_distances, permuted_distance,
    PermutedDistance,
};
pub use projective::{check_frame, eigenframe, frame_defect, ordered_pairs, projective_family, ProjectiveFamily};
