//! The unidirectionally invisible potential family and block realizers.
//!
//! For `α > −1/4`, `α ≠ 0` and a positive integer `n`, the potential
//!
//! ```text
//!     v(x) = k₀² f(x)   on [0, πn/k₀],     f(x) = −8α(3 − 2e^{2ik₀x}) / (e^{4ik₀x} + α(1 − e^{2ik₀x})²)
//! ```
//!
//! is right-invisible at `k₀` with left reflection amplitude
//! `−8πinα/(α+1)³`. Shifting its argument rotates the phase of that amplitude
//! and complex conjugation turns it into a left-invisible block, which is all
//! that is needed to realize an arbitrary nonzero amplitude on either side.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scattering::{transform_time_reversal, transform_translate, ScatteringTriple};

/// Default number of half-wavelength cells per block.
pub const DEFAULT_CELLS: u32 = 300;

/// Slack allowed when comparing support endpoints (μm).
pub const SUPPORT_SLACK: f64 = 1e-9;

/// Closed interval `[start, end]` in μm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.start && x <= self.end
    }

    /// `self ≺ other`: every point of `self` is at most every point of `other`.
    pub fn precedes(&self, other: &Interval) -> bool {
        self.end <= other.start + SUPPORT_SLACK
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// Which reflection amplitude of a unidirectionally invisible block is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `Rʳ = 0`, `T = 1`, the block reflects waves incident from the left.
    RightInvisible,
    /// `Rˡ = 0`, `T = 1`, the block reflects waves incident from the right.
    LeftInvisible,
}

impl Side {
    pub fn label(&self) -> &'static str {
        match self {
            Side::RightInvisible => "right-invisible",
            Side::LeftInvisible => "left-invisible",
        }
    }

    /// Shift `d` for integer `m` placing the reflection phase at `phi`.
    pub fn phase_offset(&self, phi: f64, m: i64, k0: f64) -> f64 {
        match self {
            Side::RightInvisible => phase_offset_right(phi, m, k0),
            Side::LeftInvisible => phase_offset_left(phi, m, k0),
        }
    }

    pub fn realize(&self, target: Complex64, k0: f64, n: u32, m: i64) -> Result<Block> {
        match self {
            Side::RightInvisible => realize_right_invisible(target, k0, n, m),
            Side::LeftInvisible => realize_left_invisible(target, k0, n, m),
        }
    }
}

/// One building block `v_{α,n}(x + d)`, complex-conjugated when `conjugated`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub alpha: f64,
    pub n: u32,
    pub k0: f64,
    pub d: f64,
    pub conjugated: bool,
}

impl Block {
    pub fn new(alpha: f64, n: u32, k0: f64, d: f64, conjugated: bool) -> Result<Self> {
        check_alpha(alpha)?;
        if alpha == 0.0 {
            return Err(Error::ZeroAlpha);
        }
        if n == 0 {
            return Err(Error::InvalidParameter("n must be a positive integer".into()));
        }
        if !(k0.is_finite() && k0 > 0.0) {
            return Err(Error::InvalidParameter(format!("k0 must be positive, got {k0}")));
        }
        if !d.is_finite() {
            return Err(Error::InvalidParameter(format!("shift d must be finite, got {d}")));
        }
        Ok(Self { alpha, n, k0, d, conjugated })
    }

    pub fn length(&self) -> f64 {
        cell_length(self.k0) * self.n as f64
    }

    pub fn support(&self) -> Interval {
        block_support(self)
    }

    pub fn side(&self) -> Side {
        if self.conjugated {
            Side::LeftInvisible
        } else {
            Side::RightInvisible
        }
    }

    /// Potential value at `x`, zero outside the support.
    pub fn value(&self, x: f64) -> Complex64 {
        let v = family_value_unchecked(self.alpha, self.n, self.k0, x + self.d);
        if self.conjugated {
            v.conj()
        } else {
            v
        }
    }

    /// Analytic amplitudes at `k0`: family amplitude, translated by `−d`, then
    /// time-reversed for conjugated blocks.
    pub fn exact_amplitudes(&self) -> ScatteringTriple {
        let base = ScatteringTriple::new(
            family_rl_unchecked(self.alpha, self.n),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            self.k0,
        );
        let shifted = transform_translate(&base, -self.d);
        if self.conjugated {
            // D = T² = 1 for an invisible block, so this cannot fail.
            transform_time_reversal(&shifted).expect("invisible block has D = 1")
        } else {
            shifted
        }
    }

    /// The nonzero reflection amplitude at `k0`.
    pub fn reflection(&self) -> Complex64 {
        let s = self.exact_amplitudes();
        if self.conjugated {
            s.rr
        } else {
            s.rl
        }
    }

    pub fn conjugate(&self) -> Block {
        Block { conjugated: !self.conjugated, ..*self }
    }

    pub fn translated(&self, a: f64) -> Block {
        Block { d: self.d - a, ..*self }
    }
}

/// Ordered list of blocks with pairwise disjoint supports at a common `k0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    k0: f64,
    blocks: Vec<Block>,
    metadata: String,
}

impl PotentialSpec {
    pub fn new(k0: f64, blocks: Vec<Block>, metadata: impl Into<String>) -> Result<Self> {
        if !(k0.is_finite() && k0 > 0.0) {
            return Err(Error::InvalidParameter(format!("k0 must be positive, got {k0}")));
        }
        for (index, b) in blocks.iter().enumerate() {
            if (b.k0 - k0).abs() > 1e-12 * k0 {
                return Err(Error::MismatchedWavenumber { index, expected: k0, found: b.k0 });
            }
        }
        for (i, pair) in blocks.windows(2).enumerate() {
            if !pair[0].support().precedes(&pair[1].support()) {
                return Err(Error::OverlappingSupports { left: i, right: i + 1 });
            }
        }
        Ok(Self { k0, blocks, metadata: metadata.into() })
    }

    pub fn free(k0: f64) -> Self {
        Self { k0, blocks: Vec::new(), metadata: String::new() }
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn with_metadata(mut self, metadata: impl Into<String>) -> Self {
        self.metadata = metadata.into();
        self
    }

    pub fn is_free(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Smallest interval containing every block, `None` for the free spec.
    pub fn support(&self) -> Option<Interval> {
        let first = self.blocks.first()?.support();
        Some(self.blocks.iter().fold(first, |acc, b| acc.hull(&b.support())))
    }

    /// Spec of `v(x − a)`.
    pub fn translated(&self, a: f64) -> PotentialSpec {
        PotentialSpec {
            k0: self.k0,
            blocks: self.blocks.iter().map(|b| b.translated(a)).collect(),
            metadata: self.metadata.clone(),
        }
    }

    /// Spec of `v(x)*`.
    pub fn conjugated(&self) -> PotentialSpec {
        PotentialSpec {
            k0: self.k0,
            blocks: self.blocks.iter().map(Block::conjugate).collect(),
            metadata: self.metadata.clone(),
        }
    }
}

/// Length of one half-wavelength cell, `π/k₀`.
#[inline]
pub fn cell_length(k0: f64) -> f64 {
    PI / k0
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= -0.25 {
        return Err(Error::FamilySingular { alpha });
    }
    Ok(())
}

/// `f_α(x)` without the support cutoff.
#[inline]
pub fn family_profile(alpha: f64, k0: f64, x: f64) -> Complex64 {
    let w = Complex64::from_polar(1.0, 2.0 * k0 * x);
    let one_minus_w = Complex64::new(1.0, 0.0) - w;
    -8.0 * alpha * (Complex64::new(3.0, 0.0) - 2.0 * w) / (w * w + alpha * one_minus_w * one_minus_w)
}

#[inline]
fn family_value_unchecked(alpha: f64, n: u32, k0: f64, x: f64) -> Complex64 {
    let length = cell_length(k0) * n as f64;
    if x < 0.0 || x > length {
        Complex64::new(0.0, 0.0)
    } else {
        k0 * k0 * family_profile(alpha, k0, x)
    }
}

/// `k₀² f_α(x)` on `[0, πn/k₀]`, zero elsewhere.
pub fn family_value(alpha: f64, n: u32, k0: f64, x: f64) -> Result<Complex64> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Err(Error::ZeroAlpha);
    }
    Ok(family_value_unchecked(alpha, n, k0, x))
}

#[inline]
fn family_rl_unchecked(alpha: f64, n: u32) -> Complex64 {
    Complex64::new(0.0, -8.0 * PI * n as f64 * alpha / (alpha + 1.0).powi(3))
}

/// Left reflection amplitude of the unshifted family block at `k₀`.
pub fn family_rl(alpha: f64, n: u32) -> Result<Complex64> {
    check_alpha(alpha)?;
    Ok(family_rl_unchecked(alpha, n))
}

/// Phase angle in `(−π, π]`.
///
/// Values within `1e-12` of `−π` are mapped to `+π`, so that amplitudes on the
/// negative real axis get the same phase regardless of the sign of a
/// round-off imaginary part.
pub fn phase_angle(z: Complex64) -> f64 {
    let phi = z.arg();
    if phi <= -PI + 1e-12 {
        PI
    } else {
        phi
    }
}

/// Smallest positive root of `8πnα = |R|(α+1)³`.
///
/// The left side of `8πnα/(α+1)³ = |R|` increases monotonically on `(0, 1/2]`,
/// so a root exists there iff `|R| ≤ 32πn/27`.
pub fn solve_alpha(magnitude: f64, n: u32) -> Result<f64> {
    if !(magnitude.is_finite() && magnitude > 0.0) {
        return Err(Error::ZeroTarget);
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be a positive integer".into()));
    }
    let scale = 8.0 * PI * n as f64;
    let g = |a: f64| scale * a / (a + 1.0).powi(3) - magnitude;
    let dg = |a: f64| scale * (1.0 - 2.0 * a) / (a + 1.0).powi(4);

    let turning = 0.5;
    if g(turning) < 0.0 {
        return Err(Error::MagnitudeTooLarge { magnitude, n });
    }

    // Safeguarded Newton inside the bracket [lo, hi] with g(lo) < 0 ≤ g(hi).
    let (mut lo, mut hi) = (0.0, turning);
    let mut a = (magnitude / scale).min(turning);
    for _ in 0..100 {
        let ga = g(a);
        if ga.abs() < 1e-13 * magnitude {
            return Ok(a);
        }
        if ga < 0.0 {
            lo = a;
        } else {
            hi = a;
        }
        let step = ga / dg(a);
        let next = a - step;
        a = if next > lo && next < hi && step.is_finite() {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    if g(a).abs() < 1e-12 * magnitude {
        Ok(a)
    } else {
        Err(Error::MagnitudeTooLarge { magnitude, n })
    }
}

/// Shift `d` such that `v_{α,n}(x + d)` has left reflection phase `phi`
/// (starting from the family phase `−π/2`).
pub fn phase_offset_right(phi: f64, m: i64, k0: f64) -> f64 {
    ((4 * m - 1) as f64 * PI - 2.0 * phi) / (4.0 * k0)
}

/// Shift `d` such that `v_{α,n}(x + d)*` has right reflection phase `phi`.
pub fn phase_offset_left(phi: f64, m: i64, k0: f64) -> f64 {
    (phi + PI / 2.0 + 2.0 * PI * m as f64) / (2.0 * k0)
}

pub fn realize_right_invisible(target_rl: Complex64, k0: f64, n: u32, m: i64) -> Result<Block> {
    if target_rl.norm() == 0.0 {
        return Err(Error::ZeroTarget);
    }
    let alpha = solve_alpha(target_rl.norm(), n)?;
    Block::new(alpha, n, k0, phase_offset_right(phase_angle(target_rl), m, k0), false)
}

pub fn realize_left_invisible(target_rr: Complex64, k0: f64, n: u32, m: i64) -> Result<Block> {
    if target_rr.norm() == 0.0 {
        return Err(Error::ZeroTarget);
    }
    let alpha = solve_alpha(target_rr.norm(), n)?;
    Block::new(alpha, n, k0, phase_offset_left(phase_angle(target_rr), m, k0), true)
}

/// `[−d, L_n − d]`.
pub fn block_support(b: &Block) -> Interval {
    Interval::new(-b.d, b.length() - b.d)
}

pub fn evaluate_spec(spec: &PotentialSpec, x: f64) -> Complex64 {
    spec.blocks.iter().map(|b| b.value(x)).sum()
}

/// Principal root of `1 − v(x)/k₀²`.
pub fn refractive_index(spec: &PotentialSpec, x: f64) -> Result<Complex64> {
    refractive_index_at(spec, x, spec.k0)
}

pub fn refractive_index_at(spec: &PotentialSpec, x: f64, k: f64) -> Result<Complex64> {
    let u = Complex64::new(1.0, 0.0) - evaluate_spec(spec, x) / (k * k);
    if u.re <= 0.0 {
        return Err(Error::RefractiveBranch { x });
    }
    Ok(u.sqrt())
}
