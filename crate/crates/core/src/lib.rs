//! Energies (trace norms) of random symmetric band circulant and band
//! Toeplitz matrices.
//!
//! A band matrix is built from a coefficient vector `a_1..a_b`; the circulant
//! version places `a_k` on the `k`-th diagonals with wraparound, the Toeplitz
//! version without. The crate computes their spectra and energies, Monte Carlo
//! and exact expectations, the explicit finite-size bounds relating the
//! normalized expected energy `E/(n sqrt b)` to its limit `2 sigma / sqrt(pi)`,
//! Dirichlet-kernel constants those bounds rely on, and reference energy
//! constants for several other random graph ensembles.

pub mod asymptotics;
pub mod bounds;
pub mod dirichlet;
pub mod ensembles;
pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod quadrature;
pub mod rng;
pub mod spectral;

pub use ensembles::{
    build_circulant, build_toeplitz, sample_coefficients, CirculantMatrix, CoefficientVector,
    DistributionKind, DistributionSpec, ToeplitzMatrix,
};
pub use error::{Error, Result};
pub use experiments::{EstimateRecord, ExperimentConfig};
pub use spectral::{CirculantEnergy, EnergyValue, Spectrum, SpectrumMethod};
