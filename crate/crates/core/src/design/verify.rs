use num_complex::Complex64;

use crate::blocks::PotentialSpec;
use crate::error::Result;
use crate::scattering::ScatteringTriple;
use crate::solver::{scattering_numeric, PotentialFunction, SolverOptions};

use super::plan::DesignTarget;

/// Numerically achieved amplitudes of a spec against a target.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub target: DesignTarget,
    pub achieved: ScatteringTriple,
    /// `|Rˡ − Rˡ_target|`, `|Rʳ − Rʳ_target|`, `|T − T_target|`.
    pub residuals: [f64; 3],
    pub tol: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|r| *r <= self.tol)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn residuals(achieved: &ScatteringTriple, target: &DesignTarget) -> [f64; 3] {
    let diff = |a: Complex64, b: Complex64| (a - b).norm();
    [diff(achieved.rl, target.rl), diff(achieved.rr, target.rr), diff(achieved.t, target.t)]
}

/// Integrates the wave equation for `spec` at `target.k0` and compares.
pub fn verify(
    spec: &PotentialSpec,
    target: &DesignTarget,
    tol: f64,
    opts: &SolverOptions,
) -> Result<VerifyReport> {
    let potential = PotentialFunction::from_spec(spec);
    let achieved = scattering_numeric(&potential, target.k0, opts)?;
    Ok(VerifyReport { target: *target, residuals: residuals(&achieved, target), achieved, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_spec_matches_free_target() {
        let k0 = 2.0 * PI;
        let tgt = DesignTarget::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            k0,
        )
        .unwrap();
        let r = verify(&PotentialSpec::free(k0), &tgt, 1e-12, &SolverOptions::default()).unwrap();
        assert_eq!(r.residuals, [0.0; 3]);
        assert!(r.passed());
    }
}
