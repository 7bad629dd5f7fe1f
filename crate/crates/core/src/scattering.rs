//! Transfer matrices, scattering amplitudes and their symmetry transformations.
//!
//! A finite-range potential is characterised at one wavenumber `k` either by
//! its transfer matrix `M`, which maps the left plane-wave coefficients
//! `(A₋, B₋)` onto the right ones `(A₊, B₊)`, or by the triple of left/right
//! reflection amplitudes and the transmission amplitude. The two descriptions
//! are related by
//!
//! ```text
//!     M = [ T − RˡRʳ/T   Rʳ/T ]
//!         [   −Rˡ/T       1/T ]
//! ```
//!
//! which degenerates when `T` diverges. Divergent transmission therefore only
//! ever appears at the matrix level, as `m22 → 0`.

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type ComplexValue = Complex64;

/// Default relative threshold below which `|m22|` is treated as a spectral
/// singularity.
pub const SINGULARITY_THRESHOLD: f64 = 1e-10;

#[inline]
pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Reflection and transmission amplitudes at wavenumber `k` (rad/μm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringTriple {
    pub rl: Complex64,
    pub rr: Complex64,
    pub t: Complex64,
    pub k: f64,
}

impl ScatteringTriple {
    pub fn new(rl: Complex64, rr: Complex64, t: Complex64, k: f64) -> Self {
        Self { rl, rr, t, k }
    }

    /// Amplitudes of the free potential.
    pub fn free(k: f64) -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), k)
    }

    /// `D = T² − RˡRʳ`.
    pub fn d(&self) -> Complex64 {
        self.t * self.t - self.rl * self.rr
    }

    /// Largest componentwise distance to `other`, ignoring `k`.
    pub fn max_abs_diff(&self, other: &ScatteringTriple) -> f64 {
        (self.rl - other.rl)
            .norm()
            .max((self.rr - other.rr).norm())
            .max((self.t - other.t).norm())
    }
}

/// 2×2 complex transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl TransferMatrix {
    pub const fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub const fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::new(one, zero, zero, one)
    }

    pub fn diagonal(a: Complex64, b: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(a, zero, zero, b)
    }

    /// Transfer matrix of a left-invisible block, `[[1, Rʳ], [0, 1]]`.
    pub fn upper(rr: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::new(one, rr, Complex64::new(0.0, 0.0), one)
    }

    /// Transfer matrix of a right-invisible block, `[[1, 0], [−Rˡ, 1]]`.
    pub fn lower(rl: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::new(one, Complex64::new(0.0, 0.0), -rl, one)
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.m11.norm_sqr() + self.m12.norm_sqr() + self.m21.norm_sqr() + self.m22.norm_sqr())
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &TransferMatrix) -> f64 {
        [
            self.m11 - other.m11,
            self.m12 - other.m12,
            self.m21 - other.m21,
            self.m22 - other.m22,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        TransferMatrix::new(
            self.m11 * rhs.m11 + self.m12 * rhs.m21,
            self.m11 * rhs.m12 + self.m12 * rhs.m22,
            self.m21 * rhs.m11 + self.m22 * rhs.m21,
            self.m21 * rhs.m12 + self.m22 * rhs.m22,
        )
    }
}

pub fn amplitudes_to_matrix(s: &ScatteringTriple) -> Result<TransferMatrix> {
    if s.t.norm() == 0.0 || !is_finite(s.t) {
        return Err(Error::DivergentTransmission);
    }
    let inv_t = s.t.inv();
    Ok(TransferMatrix::new(
        s.t - s.rl * s.rr * inv_t,
        s.rr * inv_t,
        -s.rl * inv_t,
        inv_t,
    ))
}

/// Inverse of [`amplitudes_to_matrix`] using the default singularity threshold.
pub fn matrix_to_amplitudes(m: &TransferMatrix, k: f64) -> Result<ScatteringTriple> {
    matrix_to_amplitudes_with_threshold(m, k, SINGULARITY_THRESHOLD)
}

/// Treats `|m22| < rel_threshold · ‖M‖` as a spectral singularity.
pub fn matrix_to_amplitudes_with_threshold(
    m: &TransferMatrix,
    k: f64,
    rel_threshold: f64,
) -> Result<ScatteringTriple> {
    let m22_abs = m.m22.norm();
    if m22_abs == 0.0 || m22_abs < rel_threshold * m.norm() {
        return Err(Error::SpectralSingularity { m22_abs });
    }
    let t = m.m22.inv();
    Ok(ScatteringTriple::new(-m.m21 * t, m.m12 * t, t, k))
}

/// Transfer matrix of `v_left + v_right` where the support of `v_left` lies to
/// the left of that of `v_right`.
pub fn compose(m_right: &TransferMatrix, m_left: &TransferMatrix) -> TransferMatrix {
    *m_right * *m_left
}

/// Space reflection `x → −x`.
pub fn transform_parity(s: &ScatteringTriple) -> ScatteringTriple {
    ScatteringTriple::new(s.rr, s.rl, s.t, s.k)
}

/// Translation `v(x) → v(x − a)`.
pub fn transform_translate(s: &ScatteringTriple, a: f64) -> ScatteringTriple {
    let phase = Complex64::from_polar(1.0, 2.0 * a * s.k);
    ScatteringTriple::new(s.rl * phase, s.rr * phase.conj(), s.t, s.k)
}

/// Amplitudes of the complex-conjugated potential at the same real `k`.
pub fn transform_time_reversal(s: &ScatteringTriple) -> Result<ScatteringTriple> {
    let d = s.d();
    if d.norm() == 0.0 {
        return Err(Error::DegenerateTimeReversal);
    }
    let dc = d.conj();
    Ok(ScatteringTriple::new(
        -s.rr.conj() / dc,
        -s.rl.conj() / dc,
        s.t.conj() / dc,
        s.k,
    ))
}
