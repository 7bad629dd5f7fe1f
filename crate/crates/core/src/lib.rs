//! Design and verification of one-dimensional complex scattering potentials
//! with prescribed reflection and transmission amplitudes at a single
//! wavenumber.
//!
//! Designs are sums of finite-range unidirectionally invisible blocks
//! ([`blocks`]), planned from the target amplitudes with transfer-matrix
//! algebra ([`scattering`], [`design`]), and checked by direct numerical
//! integration of the wave equation ([`solver`]).
//!
//! Units: lengths in μm, wavenumbers in rad/μm, angles in radians.

pub mod blocks;
pub mod design;
pub mod error;
pub mod scattering;
pub mod solver;

pub use blocks::{Block, Interval, PotentialSpec, Side};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use scattering::{ScatteringTriple, TransferMatrix};
