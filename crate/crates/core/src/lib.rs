//! Exact computations with graded matrix factorizations of weighted
//! homogeneous polynomials.
//!
//! The crate covers the whole pipeline: exact scalars and polynomial rings,
//! graded matrices and factorizations, the push-forward along a hyperplane
//! section `F = f + w g`, morphism spaces in the homotopy category, an
//! independent module-theoretic oracle over `R/(f)`, and harnesses that
//! check the Hom decomposition of push-forwards and Serre duality.

pub mod corpus;
pub mod dsl;
pub mod error;
pub mod gmatrix;
pub mod hom;
pub mod invertible;
pub mod linsys;
pub mod mf;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod push;
pub mod run;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use gmatrix::GradedMatrix;
pub use hom::{hom_shifted, hom_space, hom_table, HomResult};
pub use mf::{MatrixFactorization, MorphismPair};
pub use poly::{Degree, GradedRing, Poly, Ring};
pub use push::SectionData;
pub use scalar::{Field, Scalar, ScalarMatrix};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
