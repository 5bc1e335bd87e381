//! Exact walk matrices of special graph families, their ranks and Smith
//! normal forms, equitable-partition quotients, and spectral cross-checks.
//!
//! The central object is the extended Dynkin tree on `n + 1` vertices. Its walk
//! matrix `W = [e, Ae, ..., A^n e]` has rank `floor(n/2)`; the [`verify`] module
//! checks that and the surrounding identities for any `n >= 4`.

pub mod error;
pub mod graph;
pub mod linalg;
pub mod quotient;
pub mod report;
pub mod snf;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{make_dynkin, make_extended_dynkin, make_path, Family, Graph};
pub use linalg::{det_exact, rank_fraction_free, rank_modular, walk_matrix, walk_matrix_square, IntMatrix};
pub use quotient::{canonical_partition, divisor_matrix, hat_walk_matrix, is_equitable, EquitablePartition};
pub use snf::{build_w_prime, integrally_equivalent, rank_via_snf, smith_normal_form, SnfResult};
pub use spectra::{
    count_main_eigenvalues, cosine_sum, det_walk_spectral, divisor_eigenpairs, main_value_pattern,
    symmetric_eigen, ClosedFormEigenpair, SpectrumReport,
};
pub use verify::{conjecture_check, scan, verify, verify_with, Check, ConjectureVerdict, VerifyReport};
