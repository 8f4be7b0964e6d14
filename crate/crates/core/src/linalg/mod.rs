//! Dense complex matrix types and the numerical kernels behind them.

mod eigen;
mod matrix;
mod random;
mod unitaries;

pub use eigen::{eig_hermitian, EigenDecomposition};
pub(crate) use matrix::check_dim;
pub use matrix::{hs_inner, unitarity_defect, ComplexMatrix, DensityMatrix, HermitianOperator, UnitaryMatrix, MAX_DIM};
pub use random::{derive_seed, random_density, random_hermitian, random_unitary, GaussianStream};
pub(crate) use unitaries::root_of_unity;
pub use unitaries::{fourier_unitary, permutation_unitary, permutations, propagator, Propagator};

pub use num_complex::Complex64;
