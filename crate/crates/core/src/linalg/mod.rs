//! Small dense linear algebra kit: real and complex matrices, a cyclic Jacobi eigensolver,
//! incremental Gram–Schmidt bases and exact fraction-free elimination.

mod complex;
mod dense;
mod exact;
mod jacobi;
mod ortho;

pub use complex::{haar_unitary, hermitian_eigenvalues, hermitian_spectral_measure, CMatrix};
pub use dense::{axpy, dot, norm, Matrix};
pub use exact::ExactEchelon;
pub use jacobi::{cluster_eigenvalues, symmetric_eigen, SymmetricEigen, JACOBI_TOLERANCE};
pub use ortho::{OrthoBasis, DROP_TOLERANCE};
