//! Periodic structured-grid fields and their discrete differential operators.

mod field;
pub mod fourier;
mod grid;
pub mod ops;

pub use field::{ScalarField, TensorField, VectorField};
pub use fourier::Fourier;
pub use grid::Grid;
pub use ops::{
    div, div_face, div_tensor, grad, grad_face, integrate, laplacian, laplacian_compact, sym_grad,
    variational_derivative_fd,
};
