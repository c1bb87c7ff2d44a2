//! Dense and banded linear algebra for the second-difference penalty.
//!
//! Everything here is specialised to the matrix
//!
//! ```text
//! S_l = I_l + λ Fᵀ F
//! ```
//!
//! where `F` is the `(l-2) × l` second-difference operator. `S_l` is
//! symmetric positive definite and pentadiagonal, while its inverse is dense.
//! Three families of routines live here:
//!
//! - [`penalty`]: the operator `F`, the matrix `S_l`, and direct solves
//!   (a general dense Cholesky, plus a banded `O(l)` path for practical use).
//! - [`woodbury`]: the rank-one recursion that grows `S_{t-1}⁻¹` into `S_t⁻¹`
//!   starting from the closed-form `3 × 3` inverse.
//! - [`eigen`]: eigenvalues of symmetric pentadiagonal matrices by band
//!   reduction to tridiagonal form followed by implicit QL.

pub mod eigen;
pub mod penalty;
pub mod woodbury;

pub use eigen::{pentadiagonal_eigenvalues, tridiagonal_eigenvalues, SymmetricBands};
pub use penalty::{
    penalty_bands, penalty_matrix, second_diff_apply, solve_banded, solve_direct, DirectSolver,
    PenaltyMatrix, SecondDiffOperator,
};
pub use woodbury::{s3_inverse, woodbury_step, InverseState, InverseTail, WoodburyStep};
