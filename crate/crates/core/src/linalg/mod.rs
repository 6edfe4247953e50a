//! Exact linear algebra over Z, Q and F_p.

mod fingen;
mod matrix;
mod modp;
mod rational;
mod smith;

pub use fingen::FinGenAbGroup;
pub use matrix::{IntMatrix, Matrix, RatMatrix, Ring};
pub use modp::{is_prime, mod_p_nullity, mod_p_rank, mod_p_reduce, ModpMatrix};
pub use rational::{
    binomial_sign_matrix, determinant, eigenvalue_one_multiplicity, exterior_power, inverse,
    kernel_basis, kernel_rank, rank, rref, scale_and_certify_integral, spectral_radius_probe,
    subsets, AsRational, SpectralProbe,
};
pub use smith::{
    cokernel, cokernel_class, integer_kernel, integer_kernel_rank, smith_normal_form,
    solve_integer, solve_with, SmithDecomposition,
};
