//! GUE sampling, matrix OU dynamics, eigenvalues and Monte Carlo estimators.

pub mod dump;
pub mod eigen;
pub mod matrix;
pub mod montecarlo;
pub mod ou;

pub use eigen::{eigen_decomposition, eigenvalues, spectrum, EigenDecomposition, SpectrumSample};
pub use matrix::{sample_gue, sample_gue_tridiagonal, sample_gue_with, sample_rng, HermitianMatrix, Tridiagonal};
pub use montecarlo::{
    mc_charpoly, mc_counting, mc_density, mc_resolvent, sample_spectrum, CharpolyMoment, ComplexEstimate,
    CountingStats, Histogram, Sampler,
};
pub use ou::{ou_relaxation, ou_step, OUState, OuSnapshot};
