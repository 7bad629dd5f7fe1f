use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::ode::{Dop853, StepControl};
use super::potential::{Piece, PotentialFunction};
use crate::blocks::PotentialSpec;
use crate::error::{Error, Result};
use crate::scattering::{
    matrix_to_amplitudes_with_threshold, ScatteringTriple, TransferMatrix, SINGULARITY_THRESHOLD,
};

/// Display cap for `|T|²` (and the reflection coefficients) near singularities.
pub const T2_CAP: f64 = 1e12;

/// Local error tolerance relative to the requested global tolerance.
const LOCAL_TOL_FACTOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Target relative error on the transfer-matrix entries.
    pub tol: f64,
    /// `|m22| < singular_threshold · ‖M‖` is reported as a spectral singularity.
    pub singular_threshold: f64,
    /// Integrate one cell of a periodic piece and raise its propagator to the
    /// number of cells instead of integrating every cell.
    pub periodic_reuse: bool,
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            singular_threshold: SINGULARITY_THRESHOLD,
            periodic_reuse: true,
            max_steps: 50_000_000,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub(crate) fn step_control(&self, h_max: f64) -> StepControl {
        let local = self.tol * LOCAL_TOL_FACTOR;
        StepControl { rtol: local, atol: local, h_max, max_steps: self.max_steps }
    }
}

fn check_wavenumber(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("wavenumber must be positive, got {k}")))
    }
}

/// Propagator of `(ψ, ψ')` for `ψ'' = (v − k²)ψ` over `[x0, x1]`, as a 2×2 matrix.
fn integrate_propagator(
    piece: &Piece,
    k: f64,
    x0: f64,
    x1: f64,
    opts: &SolverOptions,
) -> Result<TransferMatrix> {
    let k2 = k * k;
    let rhs = |x: f64, y: &[Complex64; 4]| {
        let q = piece.eval(x) - k2;
        [y[1], q * y[0], y[3], q * y[2]]
    };
    let h_max = 2.0 * PI / k / 50.0;
    let mut ode = Dop853::new(rhs, opts.step_control(h_max));
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let y = ode.integrate(x0, x1, [one, zero, zero, one])?;
    Ok(TransferMatrix::new(y[0], y[2], y[1], y[3]))
}

fn free_propagator(k: f64, length: f64) -> TransferMatrix {
    let (s, c) = (k * length).sin_cos();
    TransferMatrix::new(
        Complex64::new(c, 0.0),
        Complex64::new(s / k, 0.0),
        Complex64::new(-k * s, 0.0),
        Complex64::new(c, 0.0),
    )
}

fn power(m: TransferMatrix, mut exp: u32) -> TransferMatrix {
    let mut base = m;
    let mut acc = TransferMatrix::identity();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = base * acc;
        }
        base = base * base;
        exp >>= 1;
    }
    acc
}

/// Plane-wave basis at `x`: maps `(A, B)` onto `(ψ, ψ')` for `ψ = Ae^{ikx} + Be^{−ikx}`.
fn plane_wave_basis(k: f64, x: f64) -> TransferMatrix {
    let e = Complex64::from_polar(1.0, k * x);
    let ik = Complex64::new(0.0, k);
    TransferMatrix::new(e, e.inv(), ik * e, -ik * e.inv())
}

fn plane_wave_basis_inv(k: f64, x: f64) -> TransferMatrix {
    let e = Complex64::from_polar(1.0, k * x);
    let two_ik = Complex64::new(0.0, 2.0 * k);
    TransferMatrix::new(e.inv() * 0.5, (two_ik * e).inv(), e * 0.5, -e / two_ik)
}

/// Transfer matrix of `p` at wavenumber `k` by integrating the wave equation
/// across its support and matching to plane waves at the support endpoints.
pub fn transfer_matrix_numeric(
    p: &PotentialFunction,
    k: f64,
    opts: &SolverOptions,
) -> Result<TransferMatrix> {
    check_wavenumber(k)?;
    let Some(support) = p.support() else {
        return Ok(TransferMatrix::identity());
    };
    let mut propagator = TransferMatrix::identity();
    let mut cursor = support.start;
    for piece in p.pieces() {
        let gap = piece.start() - cursor;
        if gap > 0.0 {
            propagator = free_propagator(k, gap) * propagator;
        }
        let step = if opts.periodic_reuse && piece.cells() > 1 {
            let x0 = piece.start();
            let cell = integrate_propagator(piece, k, x0, x0 + piece.cell(), opts)?;
            power(cell, piece.cells())
        } else {
            integrate_propagator(piece, k, piece.start(), piece.end(), opts)?
        };
        propagator = step * propagator;
        cursor = piece.end();
    }
    Ok(plane_wave_basis_inv(k, support.end) * propagator * plane_wave_basis(k, support.start))
}

pub fn scattering_numeric(
    p: &PotentialFunction,
    k: f64,
    opts: &SolverOptions,
) -> Result<ScatteringTriple> {
    let m = transfer_matrix_numeric(p, k, opts)?;
    matrix_to_amplitudes_with_threshold(&m, k, opts.singular_threshold)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub k: f64,
    pub rl2: f64,
    pub rr2: f64,
    pub t2: f64,
    pub arg_t: f64,
    /// Set when a coefficient hit [`T2_CAP`] or the amplitudes diverge.
    pub capped: bool,
    /// Finite amplitudes, absent for capped or failed rows.
    pub amplitudes: Option<ScatteringTriple>,
    pub error: Option<Error>,
}

impl SpectrumRow {
    fn from_matrix(k: f64, m: &TransferMatrix, opts: &SolverOptions) -> Self {
        let m22 = m.m22.norm();
        let arg_t = -m.m22.arg();
        let cap = |num: f64| {
            let v = if m22 == 0.0 { f64::INFINITY } else { (num / m22).powi(2) };
            v.min(T2_CAP)
        };
        let rl2 = cap(m.m21.norm());
        let rr2 = cap(m.m12.norm());
        let t2 = cap(1.0);
        match matrix_to_amplitudes_with_threshold(m, k, opts.singular_threshold) {
            Ok(s) => Self {
                k,
                rl2,
                rr2,
                t2,
                arg_t,
                capped: t2 >= T2_CAP || rl2 >= T2_CAP || rr2 >= T2_CAP,
                amplitudes: Some(s),
                error: None,
            },
            Err(e) => Self { k, rl2, rr2, t2, arg_t, capped: true, amplitudes: None, error: Some(e) },
        }
    }

    fn failed(k: f64, e: Error) -> Self {
        Self {
            k,
            rl2: f64::NAN,
            rr2: f64::NAN,
            t2: f64::NAN,
            arg_t: f64::NAN,
            capped: false,
            amplitudes: None,
            error: Some(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub k0: f64,
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    /// Index of the grid point closest to `k`.
    pub fn nearest(&self, k: f64) -> Option<usize> {
        self.rows
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1.k - k).abs().total_cmp(&(b.1.k - k).abs()))
            .map(|(i, _)| i)
    }

    /// Index of the row minimising `f`, skipping rows where `f` is `None`.
    pub fn argmin_by<F>(&self, f: F) -> Option<usize>
    where
        F: Fn(&SpectrumRow) -> Option<f64>,
    {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| f(r).map(|v| (i, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }
}

/// Uniform grid of `points` wavenumbers from `kmin` to `kmax` inclusive.
pub fn wavenumber_grid(kmin: f64, kmax: f64, points: usize) -> Vec<f64> {
    let step = (kmax - kmin) / (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { kmax } else { kmin + step * i as f64 })
        .collect()
}

/// Spectrum of `spec` on a uniform grid. Rows are independent and computed in
/// parallel; a failed row is recorded instead of aborting the scan.
pub fn scan_spectrum(
    spec: &PotentialSpec,
    kmin: f64,
    kmax: f64,
    points: usize,
    opts: &SolverOptions,
) -> Result<SpectrumTable> {
    if !(kmin > 0.0 && kmax > kmin && kmax.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < kmin < kmax, got [{kmin}, {kmax}]"
        )));
    }
    if points < 2 {
        return Err(Error::InvalidParameter("need at least 2 grid points".into()));
    }
    let potential = PotentialFunction::from_spec(spec);
    let rows = wavenumber_grid(kmin, kmax, points)
        .into_par_iter()
        .map(|k| match transfer_matrix_numeric(&potential, k, opts) {
            Ok(m) => SpectrumRow::from_matrix(k, &m, opts),
            Err(e) => SpectrumRow::failed(k, e),
        })
        .collect();
    Ok(SpectrumTable { k0: spec.k0(), rows })
}
