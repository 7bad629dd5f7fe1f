//! Scattering amplitudes from the contour formulation.
//!
//! With `z = e^{−2ikx}`, a potential supported on `[0, L]` determines a
//! function `S(z)` through
//!
//! ```text
//!     z² S''(z) + v(x)/(4k²) S(z) = 0,    S(1) = S'(1) = 1,
//! ```
//!
//! solved along the clockwise arc `z = e^{−2it}`, `t ∈ [0, kL]`. With
//! `z₊ = e^{−2ikL}` the amplitudes are
//!
//! ```text
//!     Rˡ = −∫ S''/(S S'²) dz,    Rʳ = S(z₊)/S'(z₊) − z₊,    T = 1/S'(z₊).
//! ```
//!
//! For a family block at `k = k₀` the arc is an `n`-fold covering of the unit
//! circle and `S(z) = z[α(z − 1)² + 1]`, so `Rˡ` follows from the residues
//! inside the circle.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::ode::Dop853;
use super::wave::SolverOptions;
use crate::blocks::Block;
use crate::error::{Error, Result};
use crate::scattering::ScatteringTriple;

/// Default quadrature density along the arc.
pub const NODES_PER_TURN: usize = 400;

/// Refinement stops once successive `Rˡ` estimates agree to this level.
const REFINE_TOL: f64 = 1e-10;
const MAX_REFINEMENTS: usize = 6;
const RESIDUE_NODES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSample {
    pub t: f64,
    pub z: Complex64,
    pub s: Complex64,
    pub ds: Complex64,
    pub d2s: Complex64,
}

/// `S` sampled on a uniform grid in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SContour {
    pub k: f64,
    pub z_plus: Complex64,
    pub samples: Vec<ContourSample>,
}

impl SContour {
    pub fn amplitudes(&self) -> Result<ScatteringTriple> {
        amplitudes_from_s(&self.samples, self.z_plus, self.k)
    }

    /// Largest `|S − S_ref|` over the samples.
    pub fn max_deviation<F>(&self, reference: F) -> f64
    where
        F: Fn(Complex64) -> Complex64,
    {
        self.samples.iter().map(|s| (s.s - reference(s.z)).norm()).fold(0.0, f64::max)
    }
}

/// `(S, S', S'')` of the family block at `k = k₀`.
pub fn family_s(alpha: f64, z: Complex64) -> (Complex64, Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let zm1 = z - one;
    let s = z * (alpha * zm1 * zm1 + one);
    let ds = alpha * (3.0 * z * z - 4.0 * z + one) + one;
    let d2s = alpha * (6.0 * z - 4.0);
    (s, ds, d2s)
}

fn intervals_for(t_end: f64, nodes_per_turn: usize) -> usize {
    let n = ((t_end / PI) * nodes_per_turn as f64).ceil() as usize;
    let n = n.max(2);
    n + n % 2
}

/// Samples of the closed-form family `S` along the `n`-fold unit circle.
pub fn family_contour(alpha: f64, n: u32, k: f64, nodes_per_turn: usize) -> SContour {
    let t_end = PI * n as f64;
    let intervals = intervals_for(t_end, nodes_per_turn);
    let samples = (0..=intervals)
        .map(|i| {
            let t = t_end * i as f64 / intervals as f64;
            let z = Complex64::from_polar(1.0, -2.0 * t);
            let (s, ds, d2s) = family_s(alpha, z);
            ContourSample { t, z, s, ds, d2s }
        })
        .collect();
    SContour { k, z_plus: Complex64::new(1.0, 0.0), samples }
}

/// Solves the `S` initial-value problem for `block` (in coordinates where its
/// support is `[0, L]`), sampling `nodes_per_turn` points per revolution.
pub fn s_solve(
    block: &Block,
    k: f64,
    nodes_per_turn: usize,
    opts: &SolverOptions,
) -> Result<SContour> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidParameter(format!("wavenumber must be positive, got {k}")));
    }
    let b = *block;
    let left = b.support().start;
    let potential = move |x_local: f64| b.value(x_local + left);
    let four_k2 = 4.0 * k * k;
    let i = Complex64::new(0.0, 1.0);

    let rhs = |t: f64, y: &[Complex64; 2]| {
        let z = Complex64::from_polar(1.0, -2.0 * t);
        let v = potential(t / k);
        [-2.0 * i * z * y[1], 2.0 * i * v / (four_k2 * z) * y[0]]
    };
    let mut ode = Dop853::new(rhs, opts.step_control(2.0 * PI / 50.0));

    let t_end = k * b.length();
    let intervals = intervals_for(t_end, nodes_per_turn);
    let sample = |t: f64, y: &[Complex64; 2]| -> Result<ContourSample> {
        if y[0].norm() < 1e-14 || y[1].norm() < 1e-14 {
            return Err(Error::ContourZero { t });
        }
        let z = Complex64::from_polar(1.0, -2.0 * t);
        let d2s = -potential(t / k) * y[0] / (four_k2 * z * z);
        Ok(ContourSample { t, z, s: y[0], ds: y[1], d2s })
    };

    let one = Complex64::new(1.0, 0.0);
    let mut y = [one, one];
    let mut samples = Vec::with_capacity(intervals + 1);
    samples.push(sample(0.0, &y)?);
    let mut t_prev = 0.0;
    for j in 1..=intervals {
        let t = t_end * j as f64 / intervals as f64;
        y = ode.integrate(t_prev, t, y)?;
        samples.push(sample(t, &y)?);
        t_prev = t;
    }
    Ok(SContour { k, z_plus: Complex64::from_polar(1.0, -2.0 * t_end), samples })
}

/// Amplitudes from `S` sampled uniformly in `t` along the arc ending at `z_plus`.
///
/// The `Rˡ` integral uses the trapezoidal rule when the arc closes on itself
/// (the integrand is then periodic) and Simpson's rule otherwise.
pub fn amplitudes_from_s(
    samples: &[ContourSample],
    z_plus: Complex64,
    k: f64,
) -> Result<ScatteringTriple> {
    if samples.len() < 3 {
        return Err(Error::InvalidParameter("need at least three contour samples".into()));
    }
    for s in samples {
        if s.s.norm() == 0.0 || s.ds.norm() == 0.0 {
            return Err(Error::ContourZero { t: s.t });
        }
    }
    let end = samples[samples.len() - 1];
    let rr = end.s / end.ds - z_plus;
    let t = end.ds.inv();

    // dz = −2iz dt
    let integrand = |s: &ContourSample| {
        s.d2s / (s.s * s.ds * s.ds) * Complex64::new(0.0, -2.0) * s.z
    };
    let intervals = samples.len() - 1;
    let h = (end.t - samples[0].t) / intervals as f64;
    let turns = end.t / PI;
    let closed = (turns - turns.round()).abs() < 1e-9 && turns.round() >= 1.0;

    let integral = if closed || intervals % 2 == 1 {
        let inner: Complex64 = samples[1..intervals].iter().map(integrand).sum();
        (inner + 0.5 * (integrand(&samples[0]) + integrand(&end))) * h
    } else {
        let mut acc = integrand(&samples[0]) + integrand(&end);
        for (j, s) in samples.iter().enumerate().take(intervals).skip(1) {
            acc += integrand(s) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    Ok(ScatteringTriple::new(-integral, rr, t, k))
}

/// Contour-route amplitudes of `block` at `k`, doubling the node density until
/// successive `Rˡ` estimates agree.
pub fn contour_amplitudes(block: &Block, k: f64, opts: &SolverOptions) -> Result<ScatteringTriple> {
    let mut nodes = NODES_PER_TURN;
    let mut previous = s_solve(block, k, nodes, opts)?.amplitudes()?;
    for _ in 0..MAX_REFINEMENTS {
        nodes *= 2;
        let next = s_solve(block, k, nodes, opts)?.amplitudes()?;
        let change = (next.rl - previous.rl).norm();
        previous = next;
        if change < REFINE_TOL {
            break;
        }
    }
    Ok(previous)
}

/// Zeros of `S` and `S'` for the family closed form, other than `z = 0`.
fn family_singular_points(alpha: f64) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    // α(z − 1)² + 1 = 0
    let root = (Complex64::new(-1.0 / alpha, 0.0)).sqrt();
    // 3αz² − 4αz + (α + 1) = 0
    let disc = Complex64::new(16.0 * alpha * alpha - 12.0 * alpha * (alpha + 1.0), 0.0).sqrt();
    vec![
        one + root,
        one - root,
        (4.0 * alpha + disc) / (6.0 * alpha),
        (4.0 * alpha - disc) / (6.0 * alpha),
    ]
}

/// `Rˡ` of the unshifted family block at `k₀`, summing the residues of
/// `S''/(S S'²)` inside the unit circle by small-circle quadrature.
pub fn rl_residue_family(alpha: f64, n: u32) -> Result<Complex64> {
    if !alpha.is_finite() || alpha <= -0.25 {
        return Err(Error::FamilySingular { alpha });
    }
    if alpha == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let others = family_singular_points(alpha);
    if others.iter().any(|p| (p.norm() - 1.0).abs() < 1e-9) {
        return Err(Error::PoleOnContour);
    }
    let mut poles = vec![Complex64::new(0.0, 0.0)];
    poles.extend(others.iter().copied().filter(|p| p.norm() < 1.0));

    let all: Vec<Complex64> = std::iter::once(Complex64::new(0.0, 0.0)).chain(others).collect();
    let integrand = |z: Complex64| {
        let (s, ds, d2s) = family_s(alpha, z);
        d2s / (s * ds * ds)
    };
    let mut residues = Complex64::new(0.0, 0.0);
    for &p in &poles {
        let nearest = all
            .iter()
            .filter(|q| (**q - p).norm() > 1e-12)
            .map(|q| (*q - p).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = 0.5 * nearest.min(1.0);
        // (1/2πi)∮ g dz over z = p + re^{iθ} is the mean of g(z)·(z − p)
        let sum: Complex64 = (0..RESIDUE_NODES)
            .map(|j| {
                let offset = Complex64::from_polar(radius, 2.0 * PI * j as f64 / RESIDUE_NODES as f64);
                integrand(p + offset) * offset
            })
            .sum();
        residues += sum / RESIDUE_NODES as f64;
    }
    // Rˡ = −∮ over n clockwise turns = 2πin Σ Res
    Ok(Complex64::new(0.0, 2.0 * PI * n as f64) * residues)
}
