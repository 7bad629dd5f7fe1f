//! Dormand–Prince 8(5,3) with step-size control for small complex systems.
//!
//! Coefficients are those of Hairer & Wanner's DOP853. The error estimate
//! combines the 5th- and 3rd-order embedded solutions the same way DOP853
//! does; dense output is not needed here and is omitted.

// the tableau is quoted at full published precision
#![allow(clippy::excessive_precision)]

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step size.
    pub h_max: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 0.526001519587677318785587544488e-01;
const C3: f64 = 0.789002279381515978178381316732e-01;
const C4: f64 = 0.118350341907227396726757197510e+00;
const C5: f64 = 0.281649658092772603273242802490e+00;
const C6: f64 = 0.333333333333333333333333333333e+00;
const C7: f64 = 0.25e+00;
const C8: f64 = 0.307692307692307692307692307692e+00;
const C9: f64 = 0.651282051282051282051282051282e+00;
const C10: f64 = 0.6e+00;
const C11: f64 = 0.857142857142857142857142857142e+00;

const B1: f64 = 5.42937341165687622380535766363e-2;
const B6: f64 = 4.45031289275240888144113950566e0;
const B7: f64 = 1.89151789931450038304281599044e0;
const B8: f64 = -5.8012039600105847814672114227e0;
const B9: f64 = 3.1116436695781989440891606237e-1;
const B10: f64 = -1.52160949662516078556178806805e-1;
const B11: f64 = 2.01365400804030348374776537501e-1;
const B12: f64 = 4.47106157277725905176885569043e-2;

const BHH1: f64 = 0.244094488188976377952755905512e+00;
const BHH2: f64 = 0.733846688281611857341361741547e+00;
const BHH3: f64 = 0.220588235294117647058823529412e-01;

const ER1: f64 = 0.1312004499419488073250102996e-01;
const ER6: f64 = -0.1225156446376204440720569753e+01;
const ER7: f64 = -0.4957589496572501915214079952e+00;
const ER8: f64 = 0.1664377182454986536961530415e+01;
const ER9: f64 = -0.3503288487499736816886487290e+00;
const ER10: f64 = 0.3341791187130174790297318841e+00;
const ER11: f64 = 0.8192320648511571246570742613e-01;
const ER12: f64 = -0.2235530786388629525884427845e-01;

const A21: f64 = 5.26001519587677318785587544488e-2;
const A31: f64 = 1.97250569845378994544595329183e-2;
const A32: f64 = 5.91751709536136983633785987549e-2;
const A41: f64 = 2.95875854768068491816892993775e-2;
const A43: f64 = 8.87627564304205475450678981324e-2;
const A51: f64 = 2.41365134159266685502369798665e-1;
const A53: f64 = -8.84549479328286085344864962717e-1;
const A54: f64 = 9.24834003261792003115737966543e-1;
const A61: f64 = 3.7037037037037037037037037037e-2;
const A64: f64 = 1.70828608729473871279604482173e-1;
const A65: f64 = 1.25467687566822425016691814123e-1;
const A71: f64 = 3.7109375e-2;
const A74: f64 = 1.70252211019544039314978060272e-1;
const A75: f64 = 6.02165389804559606850219397283e-2;
const A76: f64 = -1.7578125e-2;
const A81: f64 = 3.70920001185047927108779319836e-2;
const A84: f64 = 1.70383925712239993810214054705e-1;
const A85: f64 = 1.07262030446373284651809199168e-1;
const A86: f64 = -1.53194377486244017527936158236e-2;
const A87: f64 = 8.27378916381402288758473766002e-3;
const A91: f64 = 6.24110958716075717114429577812e-1;
const A94: f64 = -3.36089262944694129406857109825e0;
const A95: f64 = -8.68219346841726006818189891453e-1;
const A96: f64 = 2.75920996994467083049415600797e1;
const A97: f64 = 2.01540675504778934086186788979e1;
const A98: f64 = -4.34898841810699588477366255144e1;
const A101: f64 = 4.77662536438264365890433908527e-1;
const A104: f64 = -2.48811461997166764192642586468e0;
const A105: f64 = -5.90290826836842996371446475743e-1;
const A106: f64 = 2.12300514481811942347288949897e1;
const A107: f64 = 1.52792336328824235832596922938e1;
const A108: f64 = -3.32882109689848629194453265587e1;
const A109: f64 = -2.03312017085086261358222928593e-2;
const A111: f64 = -9.3714243008598732571704021658e-1;
const A114: f64 = 5.18637242884406370830023853209e0;
const A115: f64 = 1.09143734899672957818500254654e0;
const A116: f64 = -8.14978701074692612513997267357e0;
const A117: f64 = -1.85200656599969598641566180701e1;
const A118: f64 = 2.27394870993505042818970056734e1;
const A119: f64 = 2.49360555267965238987089396762e0;
const A1110: f64 = -3.0467644718982195003823669022e0;
const A121: f64 = 2.27331014751653820792359768449e0;
const A124: f64 = -1.05344954667372501984066689879e1;
const A125: f64 = -2.00087205822486249909675718444e0;
const A126: f64 = -1.79589318631187989172765950534e1;
const A127: f64 = 2.79488845294199600508499808837e1;
const A128: f64 = -2.85899827713502369474065508674e0;
const A129: f64 = -8.87285693353062954433549289258e0;
const A1210: f64 = 1.23605671757943030647266201528e1;
const A1211: f64 = 6.43392746015763530355970484046e-1;

type State<const N: usize> = [Complex64; N];

#[inline]
fn lin<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (c, k) in terms {
        let s = h * c;
        for i in 0..N {
            out[i] += k[i] * s;
        }
    }
    out
}

/// Dormand–Prince 8(5,3) integrator for `y' = f(x, y)`.
pub struct Dop853<F, const N: usize>
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    rhs: F,
    control: StepControl,
    h_next: f64,
    stats: IntegrationStats,
}

impl<F, const N: usize> Dop853<F, N>
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    pub fn new(rhs: F, control: StepControl) -> Self {
        Self { rhs, control, h_next: 0.0, stats: IntegrationStats::default() }
    }

    pub fn stats(&self) -> IntegrationStats {
        self.stats
    }

    /// Integrates from `x0` to `x1 > x0`, reusing the last accepted step size
    /// as the initial guess on subsequent calls.
    pub fn integrate(&mut self, x0: f64, x1: f64, y0: State<N>) -> Result<State<N>> {
        let span = x1 - x0;
        if span <= 0.0 {
            return Ok(y0);
        }
        let mut x = x0;
        let mut y = y0;
        let mut dy = (self.rhs)(x, &y);
        let mut h = if self.h_next > 0.0 {
            self.h_next
        } else {
            self.initial_step(x, &y, &dy)
        };
        h = h.min(self.control.h_max).min(span);
        let mut reject = false;
        let mut steps = 0usize;

        while x < x1 {
            if steps >= self.control.max_steps {
                return Err(Error::IntegrationFailed { x, h });
            }
            steps += 1;
            let last = x + h >= x1;
            if last {
                h = x1 - x;
            }
            let (y_new, err) = self.trial(x, &y, &dy, h);
            if !err.is_finite() {
                return Err(Error::IntegrationFailed { x, h });
            }
            if err <= 1.0 {
                self.stats.accepted += 1;
                let mut scale = if err == 0.0 { 6.0 } else { 0.9 * err.powf(-1.0 / 8.0) };
                scale = scale.clamp(0.333, 6.0);
                if reject {
                    scale = scale.min(1.0);
                }
                reject = false;
                x = if last { x1 } else { x + h };
                y = y_new;
                dy = (self.rhs)(x, &y);
                let proposal = (h * scale).min(self.control.h_max);
                if !last {
                    h = proposal;
                }
                self.h_next = proposal;
            } else {
                self.stats.rejected += 1;
                reject = true;
                h *= (0.9 * err.powf(-1.0 / 8.0)).max(0.333);
                if h <= f64::EPSILON * x.abs().max(span) {
                    return Err(Error::IntegrationFailed { x, h });
                }
            }
        }
        Ok(y)
    }

    fn initial_step(&self, x: f64, y: &State<N>, dy: &State<N>) -> f64 {
        let sk = |i: usize| self.control.atol + self.control.rtol * y[i].norm();
        let (mut dnf, mut dny) = (0.0, 0.0);
        for i in 0..N {
            dnf += (dy[i].norm() / sk(i)).powi(2);
            dny += (y[i].norm() / sk(i)).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            (dny / dnf).sqrt() * 0.01
        };
        h = h.min(self.control.h_max);
        let y1 = lin(y, h, &[(1.0, dy)]);
        let f1 = (self.rhs)(x + h, &y1);
        let mut der2 = 0.0;
        for i in 0..N {
            der2 += ((f1[i] - dy[i]).norm() / sk(i)).powi(2);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(1.0 / 8.0)
        };
        (100.0 * h).min(h1).min(self.control.h_max)
    }

    fn trial(&self, x: f64, y: &State<N>, k1: &State<N>, h: f64) -> (State<N>, f64) {
        let f = &self.rhs;
        let k2 = f(x + C2 * h, &lin(y, h, &[(A21, k1)]));
        let k3 = f(x + C3 * h, &lin(y, h, &[(A31, k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &lin(y, h, &[(A41, k1), (A43, &k3)]));
        let k5 = f(x + C5 * h, &lin(y, h, &[(A51, k1), (A53, &k3), (A54, &k4)]));
        let k6 = f(x + C6 * h, &lin(y, h, &[(A61, k1), (A64, &k4), (A65, &k5)]));
        let k7 = f(
            x + C7 * h,
            &lin(y, h, &[(A71, k1), (A74, &k4), (A75, &k5), (A76, &k6)]),
        );
        let k8 = f(
            x + C8 * h,
            &lin(y, h, &[(A81, k1), (A84, &k4), (A85, &k5), (A86, &k6), (A87, &k7)]),
        );
        let k9 = f(
            x + C9 * h,
            &lin(y, h, &[(A91, k1), (A94, &k4), (A95, &k5), (A96, &k6), (A97, &k7), (A98, &k8)]),
        );
        let k10 = f(
            x + C10 * h,
            &lin(
                y,
                h,
                &[
                    (A101, k1),
                    (A104, &k4),
                    (A105, &k5),
                    (A106, &k6),
                    (A107, &k7),
                    (A108, &k8),
                    (A109, &k9),
                ],
            ),
        );
        let k11 = f(
            x + C11 * h,
            &lin(
                y,
                h,
                &[
                    (A111, k1),
                    (A114, &k4),
                    (A115, &k5),
                    (A116, &k6),
                    (A117, &k7),
                    (A118, &k8),
                    (A119, &k9),
                    (A1110, &k10),
                ],
            ),
        );
        let k12 = f(
            x + h,
            &lin(
                y,
                h,
                &[
                    (A121, k1),
                    (A124, &k4),
                    (A125, &k5),
                    (A126, &k6),
                    (A127, &k7),
                    (A128, &k8),
                    (A129, &k9),
                    (A1210, &k10),
                    (A1211, &k11),
                ],
            ),
        );

        let mut slope = [Complex64::new(0.0, 0.0); N];
        for i in 0..N {
            slope[i] = k1[i] * B1
                + k6[i] * B6
                + k7[i] * B7
                + k8[i] * B8
                + k9[i] * B9
                + k10[i] * B10
                + k11[i] * B11
                + k12[i] * B12;
        }
        let y_new = lin(y, h, &[(1.0, &slope)]);

        let (mut err, mut err2) = (0.0, 0.0);
        for i in 0..N {
            let sk = self.control.atol + self.control.rtol * y[i].norm().max(y_new[i].norm());
            let e5 = slope[i] - k1[i] * BHH1 - k9[i] * BHH2 - k12[i] * BHH3;
            let e3 = k1[i] * ER1
                + k6[i] * ER6
                + k7[i] * ER7
                + k8[i] * ER8
                + k9[i] * ER9
                + k10[i] * ER10
                + k11[i] * ER11
                + k12[i] * ER12;
            err += (e3.norm() / sk).powi(2);
            err2 += (e5.norm() / sk).powi(2);
        }
        let denom = err + 0.01 * err2;
        let denom = if denom > 0.0 { denom } else { 1.0 };
        let err = h.abs() * err * (1.0 / (N as f64 * denom)).sqrt();
        (y_new, err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn control(tol: f64) -> StepControl {
        StepControl { rtol: tol, atol: tol, h_max: 0.1, max_steps: 1_000_000 }
    }

    #[test]
    fn harmonic_oscillator_matches_closed_form() {
        let k = 3.0;
        let rhs = |_x: f64, y: &[Complex64; 2]| [y[1], -k * k * y[0]];
        let mut ode = Dop853::new(rhs, control(1e-12));
        let y = ode
            .integrate(0.0, 10.0, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        assert!((y[0] - Complex64::new((k * 10.0).cos(), 0.0)).norm() < 1e-9);
        assert!((y[1] + Complex64::new(k * (k * 10.0).sin(), 0.0)).norm() < 1e-8);
    }

    #[test]
    fn complex_exponential_growth() {
        let lambda = Complex64::new(-0.3, 2.0);
        let rhs = move |_x: f64, y: &[Complex64; 1]| [lambda * y[0]];
        let mut ode = Dop853::new(rhs, control(1e-12));
        let y = ode.integrate(0.0, 4.0, [Complex64::new(1.0, 0.0)]).unwrap();
        assert!((y[0] - (lambda * 4.0).exp()).norm() < 1e-10);
        assert!(ode.stats().accepted > 0);
    }

    #[test]
    fn respects_step_ceiling() {
        let rhs = |_x: f64, _y: &[Complex64; 1]| [Complex64::new(1.0, 0.0)];
        let mut ode = Dop853::new(rhs, StepControl { h_max: 0.01, ..control(1e-6) });
        let y = ode.integrate(0.0, 1.0, [Complex64::new(0.0, 0.0)]).unwrap();
        assert!((y[0].re - 1.0).abs() < 1e-12);
        assert!(ode.stats().accepted >= 100);
    }

    #[test]
    fn step_budget_exhaustion_reports_failure() {
        let rhs = |_x: f64, y: &[Complex64; 1]| [y[0] * 50.0];
        let mut ode = Dop853::new(rhs, StepControl { max_steps: 3, ..control(1e-12) });
        assert!(matches!(
            ode.integrate(0.0, 1.0, [Complex64::new(1.0, 0.0)]),
            Err(Error::IntegrationFailed { .. })
        ));
    }
}
