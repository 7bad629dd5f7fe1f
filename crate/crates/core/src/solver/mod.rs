//! Numerical scattering amplitudes, independent of the closed forms used by
//! the designer.
//!
//! Two routes are provided: direct integration of `−ψ'' + vψ = k²ψ` across
//! the support ([`transfer_matrix_numeric`]), and the contour formulation in
//! `z = e^{−2ikx}` for single family blocks ([`contour`]).

pub mod contour;
pub mod ode;
mod potential;
mod wave;

pub use contour::{
    amplitudes_from_s, contour_amplitudes, family_contour, family_s, rl_residue_family, s_solve,
    ContourSample, SContour, NODES_PER_TURN,
};
pub use potential::{Piece, PotentialFunction};
pub use wave::{
    scan_spectrum, scattering_numeric, transfer_matrix_numeric, SolverOptions, SpectrumRow,
    SpectrumTable, T2_CAP, wavenumber_grid,
};
