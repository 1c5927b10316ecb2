//! Dense matrices over exact rationals or floats, and the spectral helpers
//! the rest of the crate is built on.

mod dense;
mod scalar;
mod spectral;

pub use dense::Matrix;
pub use scalar::Scalar;
pub use spectral::{
    is_symmetric, numeric_rank, random_orthogonal, spectral_decompose, SpectralDecomposition,
    TolerancePolicy,
};

pub(crate) use spectral::{canonical_basis, cluster_ranges, exact_sparse_nullity, null_space, polar_factor};
