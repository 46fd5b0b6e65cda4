//! Numerical toolkit for the sharp constants, extremal profiles, and
//! stability constants of Heisenberg-type uncertainty principles.
//!
//! Full-space quadratic functionals are reduced to weighted one-dimensional
//! quadratic forms through spherical-harmonic mode decomposition; sharp
//! constants become smallest generalized eigenvalues of Gram-matrix pencils
//! over spectral bases, verified against closed-form extremal profiles,
//! Hardy-inequality deficit identities, and direct N-dimensional quadrature.
//!
//! Everything is generic over the floating-point scalar through
//! [`scalar::Real`]; the `*64` aliases at the crate root fix `f64`.

pub mod basis;
pub mod cone;
pub mod eigen;
pub mod error;
pub mod forms;
pub mod hardy;
pub mod linearize;
pub mod profile;
pub mod quad;
pub mod rayleigh;
pub mod scalar;
pub mod special;
pub mod spline;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

/// Default-precision aliases.
pub type RadialProfile64 = profile::RadialProfile<f64>;
pub type ModeExpansion64 = forms::ModeExpansion<f64>;
pub type QuadraticFormSpec64 = forms::QuadraticFormSpec<f64>;
pub type QuadratureConfig64 = quad::QuadratureConfig<f64>;
pub type WeightSpec64 = quad::WeightSpec<f64>;
pub type SymMatrix64 = eigen::SymMatrix<f64>;
pub type Basis64 = basis::Basis<f64>;
pub type Cone64 = cone::Cone<f64>;
pub type KummerParams64 = special::KummerParams<f64>;
