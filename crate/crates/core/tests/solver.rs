use std::f64::consts::PI;

use proptest::prelude::*;
use uiscatter::blocks::{family_rl, Block, PotentialSpec};
use uiscatter::scattering::{transform_parity, transform_time_reversal, transform_translate};
use uiscatter::solver::{
    contour_amplitudes, scattering_numeric, transfer_matrix_numeric, PotentialFunction,
    SolverOptions,
};
use uiscatter::{Complex64, ScatteringTriple};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Closed-form amplitudes of `v0` on `[0, L]`.
fn barrier(v0: Complex64, length: f64, k: f64) -> ScatteringTriple {
    let q = (Complex64::new(k * k, 0.0) - v0).sqrt();
    let (s, co) = ((q * length).sin(), (q * length).cos());
    let i = c(0.0, 1.0);
    let denom = co - i * (k * k + q * q) / (2.0 * k * q) * s;
    let refl = -i * v0 * s / (2.0 * k * q) / denom;
    let phase = Complex64::from_polar(1.0, -k * length);
    ScatteringTriple::new(refl, refl * phase * phase, phase / denom, k)
}

fn single_block(alpha: f64, n: u32, k0: f64, d: f64) -> PotentialFunction {
    let spec = PotentialSpec::new(k0, vec![Block::new(alpha, n, k0, d, false).unwrap()], "").unwrap();
    PotentialFunction::from_spec(&spec)
}

#[test]
fn rectangular_barrier_matches_closed_form() {
    let opts = SolverOptions::default();
    for &(v0, length, k) in &[
        (c(3.0, 0.0), 1.0, 1.0),
        (c(-2.0, 0.5), 2.5, 2.0),
        (c(10.0, -4.0), 0.7, 1.5),
        (c(0.5, 0.0), 40.0, 6.0),
    ] {
        let p = PotentialFunction::rectangular(v0, 0.0, length).unwrap();
        let got = scattering_numeric(&p, k, &opts).unwrap();
        let want = barrier(v0, length, k);
        assert!(got.max_abs_diff(&want) < 1e-8, "v0 = {v0}: {:e}", got.max_abs_diff(&want));
    }
}

#[test]
fn real_barrier_conserves_flux() {
    let p = PotentialFunction::rectangular(c(4.0, 0.0), -1.0, 1.5).unwrap();
    for &k in &[0.5, 1.0, 2.0, 3.3] {
        let s = scattering_numeric(&p, k, &SolverOptions::default()).unwrap();
        assert!((s.rl.norm_sqr() + s.t.norm_sqr() - 1.0).abs() < 1e-8);
        assert!((s.rr.norm_sqr() + s.t.norm_sqr() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn unit_determinant() {
    let opts = SolverOptions::default();
    let potentials = [
        single_block(1e-3, 10, 2.0 * PI, 0.3),
        single_block(-0.2, 3, 1.0, 0.0),
        PotentialFunction::from_fn(0.0, 3.0, |x| c(x.sin(), 0.3 * x)).unwrap(),
    ];
    for p in &potentials {
        for &k in &[0.7, 1.0, 2.0 * PI, 7.1] {
            let m = transfer_matrix_numeric(p, k, &opts).unwrap();
            let err = (m.det() - 1.0).norm();
            assert!(err < 10.0 * opts.tol * m.norm().powi(2).max(1.0), "k = {k}: {err:e}");
        }
    }
}

#[test]
fn composition_of_disjoint_potentials() {
    let opts = SolverOptions::default();
    let a = PotentialFunction::from_fn(-2.0, -0.5, |x| c(1.0 + x * x, -0.4)).unwrap();
    let b = PotentialFunction::rectangular(c(0.7, 0.9), 0.3, 1.7).unwrap();
    let joined = a.join(&b).unwrap();
    for &k in &[0.8, 2.2] {
        let whole = transfer_matrix_numeric(&joined, k, &opts).unwrap();
        let parts = transfer_matrix_numeric(&b, k, &opts).unwrap()
            * transfer_matrix_numeric(&a, k, &opts).unwrap();
        assert!(whole.max_abs_diff(&parts) < 1e-8 * whole.norm());
    }
}

#[test]
fn periodic_reuse_matches_unrolled_integration() {
    let k0 = 2.0 * PI;
    let spec = PotentialSpec::new(
        k0,
        vec![
            Block::new(2e-3, 12, k0, 7.0, true).unwrap(),
            Block::new(-1e-3, 5, k0, 0.21, false).unwrap(),
        ],
        "",
    )
    .unwrap();
    let opts = SolverOptions::default();
    let periodic = PotentialFunction::from_spec(&spec);
    let unrolled = PotentialFunction::from_spec_unrolled(&spec);
    let no_reuse = SolverOptions { periodic_reuse: false, ..opts };
    for &k in &[0.95 * k0, k0, 1.3 * k0] {
        let a = transfer_matrix_numeric(&periodic, k, &opts).unwrap();
        let b = transfer_matrix_numeric(&unrolled, k, &opts).unwrap();
        let c = transfer_matrix_numeric(&periodic, k, &no_reuse).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-8 * a.norm());
        assert!(a.max_abs_diff(&c) < 1e-8 * a.norm());
    }
}

#[test]
fn invisible_at_design_wavenumber() {
    let k0 = 2.0 * PI;
    let opts = SolverOptions::default();
    for &alpha in &[-1e-4, 1e-4, 1e-3] {
        for &n in &[1u32, 10, 300] {
            let s = scattering_numeric(&single_block(alpha, n, k0, 0.0), k0, &opts).unwrap();
            let rl = family_rl(alpha, n).unwrap();
            assert!((s.t - 1.0).norm() < 1e-6, "α = {alpha}, n = {n}");
            assert!(s.rr.norm() < 1e-6);
            assert!((s.rl - rl).norm() < 1e-6 * rl.norm());
        }
    }
}

#[test]
fn contour_route_agrees_with_direct_integration() {
    let opts = SolverOptions::default();
    for &(alpha, n, k0) in &[(1e-3, 3u32, 1.0), (-1e-4, 300, 2.0 * PI), (0.05, 4, 2.0)] {
        let block = Block::new(alpha, n, k0, 0.0, false).unwrap();
        let p = single_block(alpha, n, k0, 0.0);
        for &k in &[k0, 1.01 * k0] {
            let direct = scattering_numeric(&p, k, &opts).unwrap();
            let contour = contour_amplitudes(&block, k, &opts).unwrap();
            assert!(direct.max_abs_diff(&contour) < 1e-6, "α = {alpha}, k = {k}");
        }
    }
}

fn sample_potential() -> PotentialFunction {
    PotentialFunction::from_fn(0.5, 2.0, |x| c(2.0 * (3.0 * x).cos(), 1.0 - x)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parity_by_mirroring(k in 0.5f64..4.0) {
        let opts = SolverOptions::default();
        let p = sample_potential();
        let s = scattering_numeric(&p, k, &opts).unwrap();
        let mirrored = scattering_numeric(&p.mirrored(), k, &opts).unwrap();
        prop_assert!(mirrored.max_abs_diff(&transform_parity(&s)) < 1e-8);
    }

    #[test]
    fn translation_rotates_phases(k in 0.5f64..4.0, a in -5.0f64..5.0) {
        let opts = SolverOptions::default();
        let p = sample_potential();
        let s = scattering_numeric(&p, k, &opts).unwrap();
        let shifted = scattering_numeric(&p.translated(a), k, &opts).unwrap();
        prop_assert!(shifted.max_abs_diff(&transform_translate(&s, a)) < 1e-8);
    }

    #[test]
    fn conjugation_is_time_reversal(k in 0.5f64..4.0) {
        let opts = SolverOptions::default();
        let p = sample_potential();
        let s = scattering_numeric(&p, k, &opts).unwrap();
        let conj = scattering_numeric(&p.conjugated(), k, &opts).unwrap();
        let expected = transform_time_reversal(&s).unwrap();
        prop_assert!(conj.max_abs_diff(&expected) < 1e-8 * expected.t.norm().max(1.0));
    }
}
