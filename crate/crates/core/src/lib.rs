//! Orthogonal-polynomial machinery for the Gaussian Unitary Ensemble.
//!
//! Everything is generic over [`Real`] (implemented for `f32` and `f64`).
//! Double-precision aliases are provided for the common types.
//!
//! The ensemble weight is `exp(-N Tr H^2 / 2)`, so the eigenvalue density
//! converges to the semicircle on `[-2, 2]`.

pub mod airy;
pub mod charpoly;
pub mod ensemble;
pub mod error;
pub mod hermite;
pub mod kernels;
pub mod linalg;
pub mod quadrature;
pub mod scalar;

pub use airy::{airy_ai, airy_kernel, edge_density, AiryValues};
pub use charpoly::{
    cauchy_transform, expected_charpoly, four_point_ratio, pair_correlation, ratio_kernel, scaled_four_point,
    scaled_ratio_kernel, second_moment, ComplexSpectralPoint,
};
pub use ensemble::{eigenvalues, sample_gue, HermitianMatrix, OUState, SpectrumSample};
pub use error::{Error, Result};
pub use hermite::{HermiteBasis, ScaledValue};
pub use kernels::{
    hole_probability, number_variance_asymptotic, number_variance_exact, semicircle, sine_kernel, FiniteNKernel,
    HoleKernel,
};
pub use quadrature::{fredholm_det, gauss_hermite_scaled, gauss_legendre, FredholmOperator, QuadratureRule};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;

pub type HermiteBasis64 = HermiteBasis<f64>;
pub type HermiteBasis32 = HermiteBasis<f32>;
pub type ScaledValue64 = ScaledValue<f64>;
pub type FiniteNKernel64 = FiniteNKernel<f64>;
pub type FiniteNKernel32 = FiniteNKernel<f32>;
pub type HermitianMatrix64 = HermitianMatrix<f64>;
pub type HermitianMatrix32 = HermitianMatrix<f32>;
pub type SpectrumSample64 = SpectrumSample<f64>;
pub type OUState64 = OUState<f64>;
pub type QuadratureRule64 = QuadratureRule<f64>;
