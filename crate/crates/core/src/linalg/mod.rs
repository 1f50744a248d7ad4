//! Exact linear algebra over `Z/p^s`: sparse matrices, Smith normal form,
//! and the kernel/image/cokernel computations built on it.

mod matrix;
mod module;
mod snf;

pub use matrix::{DenseMatrix, ResidueMatrix};
pub use module::{ModuleInvariants, ModuleMap};
pub(crate) use module::lift_matrix;
pub use snf::{
    cokernel_invariants, image_log_order, kernel_basis, smith_normal_form, snf_exponents, solve_in_image,
    ImageSolver, SnfResult,
};
pub(crate) use snf::{Reduction, Track};
