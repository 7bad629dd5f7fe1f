//! Two-block potentials with a spectral singularity at `k₀`.
//!
//! A left-invisible block followed by a right-invisible block has
//! `M₂₂ = 1 − Rˡ₋Rʳ₊`, so the pair diverges when the two block amplitudes
//! multiply to one. With both blocks taken from the family this fixes the
//! second block's strength `β` through
//!
//! ```text
//!     (α + 1)³(β + 1)³ + 64π²mnαβ = 0.
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::blocks::{cell_length, Block, PotentialSpec};
use crate::error::{Error, Result};

const MAX_ITER: usize = 100;
const RESIDUAL_TOL: f64 = 1e-14;

/// Small root `β > −1/4` of the singularity condition for given `α`, `m`, `n`.
///
/// Writing the condition as `h(β) = (β + 1)³ + cβ` with
/// `c = 64π²mnα/(α + 1)³`, a root above `−1/4` exists iff `c > 27/16`
/// (it then lies in `(−1/4, 0)`) or `c < −27/4` (it lies in `(0, √(−c/3) − 1)`).
pub fn solve_beta(alpha: f64, m: u32, n: u32) -> Result<f64> {
    let fail = Error::NoValidBeta { alpha, m, n };
    if !alpha.is_finite() || alpha <= -0.25 {
        return Err(Error::FamilySingular { alpha });
    }
    if alpha == 0.0 {
        return Err(Error::ZeroAlpha);
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be positive integers".into()));
    }
    let c = 64.0 * PI * PI * m as f64 * n as f64 * alpha / (alpha + 1.0).powi(3);
    let h = |b: f64| (b + 1.0).powi(3) + c * b;
    let dh = |b: f64| 3.0 * (b + 1.0).powi(2) + c;

    // bracket with h(lo) and h(hi) of opposite signs
    let (lo, hi) = if c > 27.0 / 16.0 {
        (-0.25, 0.0)
    } else if c < -27.0 / 4.0 {
        (0.0, (-c / 3.0).sqrt() - 1.0)
    } else {
        return Err(fail);
    };
    let increasing = h(hi) > h(lo);
    let (mut lo, mut hi) = (lo, hi);
    let mut b = (-1.0 / (c + 3.0)).clamp(lo, hi);
    for _ in 0..MAX_ITER {
        let hb = h(b);
        if hb.abs() < RESIDUAL_TOL {
            return if b > -0.25 { Ok(b) } else { Err(fail) };
        }
        if (hb < 0.0) == increasing {
            lo = b;
        } else {
            hi = b;
        }
        let next = b - hb / dh(b);
        b = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    Err(fail)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityDesign {
    pub spec: PotentialSpec,
    pub alpha: f64,
    pub beta: f64,
    /// `Rʳ` of the left block at `k₀`.
    pub rr_plus: Complex64,
    /// `Rˡ` of the right block at `k₀`.
    pub rl_minus: Complex64,
}

impl SingularityDesign {
    /// `M₂₂` of the pair at `k₀`; zero at an exact singularity.
    pub fn m22(&self) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.rl_minus * self.rr_plus
    }

    pub fn thickness(&self) -> f64 {
        self.spec.support().map_or(0.0, |s| s.length())
    }
}

/// Left block `w₊`: conjugated family block `(α, n)` on `[−L_n, 0]`.
/// Right block `w₋`: family block `(β, m)` on `[0, L_m]`.
pub fn design_singularity(alpha: f64, n: u32, m: u32, k0: f64) -> Result<SingularityDesign> {
    let beta = solve_beta(alpha, m, n)?;
    let plus = Block::new(alpha, n, k0, cell_length(k0) * n as f64, true)?;
    let minus = Block::new(beta, m, k0, 0.0, false)?;
    let (rr_plus, rl_minus) = (plus.reflection(), minus.reflection());
    let spec = PotentialSpec::new(k0, vec![plus, minus], "")?;
    Ok(SingularityDesign { spec, alpha, beta, rr_plus, rl_minus })
}

/// Spec of the complex-conjugate potential.
pub fn conjugate_spec(spec: &PotentialSpec) -> PotentialSpec {
    spec.conjugated()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::transform_time_reversal;

    fn residual(alpha: f64, beta: f64, m: u32, n: u32) -> f64 {
        let c = 64.0 * PI * PI * m as f64 * n as f64 * alpha / (alpha + 1.0).powi(3);
        (beta + 1.0).powi(3) + c * beta
    }

    #[test]
    fn reference_beta() {
        let b = solve_beta(-1e-4, 300, 300).unwrap();
        assert!((b / 1.759e-4 - 1.0).abs() < 5e-4, "β = {b}");
        assert!(residual(-1e-4, b, 300, 300).abs() < 1e-14);
    }

    #[test]
    fn small_root_has_opposite_sign() {
        for &alpha in &[-0.2, -1e-2, -1e-4, -1e-7, 1e-6, 1e-4, 1e-2, 0.5, 3.0] {
            for &(m, n) in &[(300, 300), (10, 40), (1, 1)] {
                match solve_beta(alpha, m, n) {
                    Ok(b) => {
                        assert!(alpha * b < 0.0, "α = {alpha}, β = {b}");
                        assert!(b > -0.25);
                        assert!(residual(alpha, b, m, n).abs() < 1e-14);
                    }
                    Err(e) => assert_eq!(e, Error::NoValidBeta { alpha, m, n }),
                }
            }
        }
    }

    #[test]
    fn swap_symmetry() {
        for &(alpha, m, n) in &[(-1e-4, 300, 300), (2e-4, 120, 45), (-3e-5, 900, 700)] {
            let b = solve_beta(alpha, m, n).unwrap();
            let back = solve_beta(b, n, m).unwrap();
            assert!((back / alpha - 1.0).abs() < 1e-10, "{back} vs {alpha}");
        }
    }

    #[test]
    fn weak_coupling_has_no_root() {
        // c = 64π²α/(α+1)³ sits inside [−27/4, 27/16] for tiny α, m = n = 1
        assert!(matches!(solve_beta(1e-5, 1, 1), Err(Error::NoValidBeta { .. })));
        assert!(matches!(solve_beta(-0.3, 1, 1), Err(Error::FamilySingular { .. })));
        assert_eq!(solve_beta(0.0, 1, 1), Err(Error::ZeroAlpha));
    }

    #[test]
    fn reference_singularity_design() {
        let k0 = 2.0 * PI;
        let d = design_singularity(-1e-4, 300, 300, k0).unwrap();
        assert!((d.rr_plus - Complex64::new(0.0, 0.754)).norm() < 0.005 * 0.754);
        assert!((d.rl_minus - Complex64::new(0.0, -1.323)).norm() < 0.005 * 1.323);
        assert!((d.rr_plus * d.rl_minus - 1.0).norm() < 1e-3);
        assert!((d.thickness() - 300.0).abs() < 1e-9);
        let s = d.spec.blocks();
        assert_eq!((s[0].support().start, s[0].support().end), (-150.0, 0.0));
        assert_eq!((s[1].support().start, s[1].support().end), (0.0, 150.0));
    }

    #[test]
    fn double_conjugation_is_identity() {
        let d = design_singularity(-1e-4, 300, 300, 2.0 * PI).unwrap();
        assert_eq!(conjugate_spec(&conjugate_spec(&d.spec)), d.spec);
    }

    #[test]
    fn conjugated_right_invisible_block() {
        let b = Block::new(1e-3, 7, 2.0, 0.37, false).unwrap();
        let s = b.exact_amplitudes();
        let c = b.conjugate().exact_amplitudes();
        assert!(c.rl.norm() < 1e-15);
        assert!((c.rr + s.rl.conj()).norm() < 1e-15);
        assert!(transform_time_reversal(&s).unwrap().max_abs_diff(&c) < 1e-15);
    }
}
