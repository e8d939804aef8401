//! Self-contained complex Hermitian linear algebra: Jacobi eigendecomposition,
//! spectral matrix functions, Schatten norms and the scalar trace inequalities
//! (Peierls–Bogoliubov, Golden–Thompson, Lieb, Audenaert, Powers–Størmer).

mod eigen;
mod functions;
mod inequalities;
mod matrix;

pub use eigen::{eig_hermitian, eigvals_hermitian, HermitianEigen, Spectrum};
pub use functions::{abs_hermitian, hs_norm, mat_func, support_cutoff, trace_norm, SpectralFn};
pub use inequalities::{
    audenaert_gap, gt_gap, lieb_triple_lhs, lieb_triple_rhs, pb_gap, powers_stormer_sandwich,
};
pub use matrix::{commutator, ComplexMatrix};
