//! Triad graph operators, the Tonnetz Laplacian and their eigenbases.

mod basis;
mod jacobi;
mod matrix;
mod tonnetz;
mod triad;

pub use basis::{eigenprogression_basis, EigenprogressionBasis, Eigenprogression, EIGENVALUE_GROUPING_TOL};
pub use jacobi::{symmetric_eigendecomposition, SymmetricEigen, MAX_SWEEPS};
pub use matrix::SquareMatrix;
pub use tonnetz::{tonnetz_laplacian, vertex_index, TonnetzLaplacian, PITCH_CLASSES, THIRD_SIZES};
pub use triad::{eigentriad, triad_operator, Eigentriad, Quality, TriadOperator, BETA1_VALUES};
