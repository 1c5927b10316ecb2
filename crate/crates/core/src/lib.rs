//! Quadratic harmonic morphisms between Euclidean spaces and the algebra
//! behind them: Clifford systems, O-systems (Hurwitz–Radon families) and
//! orthogonal multiplications.
//!
//! Constructions produce exact rational matrices, so the defining identities
//! of the objects they return hold exactly. Float input is accepted
//! everywhere and checked against a [`TolerancePolicy`].

pub mod clifford;
pub mod error;
pub mod gallery;
pub mod matrix;
pub mod orthomul;
pub mod osystem;
pub mod qhm;
pub mod sampling;

mod cayley;

pub use clifford::CliffordSystem;
pub use error::{Error, Result};
pub use matrix::{Matrix, Scalar, TolerancePolicy};
pub use orthomul::OrthogonalMultiplication;
pub use osystem::OSystem;
pub use qhm::QuadraticHarmonicMorphism;

// The guide's snippets run as doctests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/arithmetic.md")]
    mod arithmetic {}
    #[doc = include_str!("../../../book/src/clifford-systems.md")]
    mod clifford_systems {}
    #[doc = include_str!("../../../book/src/o-systems.md")]
    mod o_systems {}
    #[doc = include_str!("../../../book/src/orthogonal-multiplications.md")]
    mod orthogonal_multiplications {}
    #[doc = include_str!("../../../book/src/harmonic-morphisms.md")]
    mod harmonic_morphisms {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/range-extension.md")]
    mod range_extension {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
