//! Bessel and Hankel functions of the first kind for complex arguments.
//!
//! Three regimes share one interface: ascending series for `|z| <= 8`,
//! Miller backward recurrence with Neumann series for `Y` up to `|z| = 17`,
//! and the Hankel asymptotic expansion beyond.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::{Error, Result, EULER_GAMMA};

const SERIES_MAX: f64 = 8.0;
const ASYMPTOTIC_MIN: f64 = 17.0;
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Values of `J_0..J_3`, `Y_0..Y_2` and `H^(1)_0..H^(1)_2` at one argument,
/// plus the constant-free combinations `z H_1(z) + 2i/pi` and
/// `z^2 H_2(z) + 4i/pi` that stay accurate as `z -> 0`.
#[derive(Debug, Clone, Copy)]
pub struct BesselSet {
    pub j: [Complex64; 4],
    pub y: [Complex64; 3],
    pub h: [Complex64; 3],
    pub zh1_reg: Complex64,
    pub z2h2_reg: Complex64,
}

impl BesselSet {
    /// Evaluates the set at `z != 0`.
    pub fn eval(z: Complex64) -> Result<Self> {
        if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain(format!(
                "Bessel functions of the second kind are singular at z = {z}"
            )));
        }
        let a = z.norm();
        Ok(if a <= SERIES_MAX {
            series(z)
        } else if a < ASYMPTOTIC_MIN {
            miller(z)
        } else {
            asymptotic(z)
        })
    }
}

/// `H_0^(1)(z) = J_0(z) + i Y_0(z)`.
pub fn hankel0_first_kind(z: Complex64) -> Result<Complex64> {
    Ok(BesselSet::eval(z)?.h[0])
}

/// `H_n^(1)(z)` for `n` in `0..=2`.
pub fn hankel_first_kind(n: usize, z: Complex64) -> Result<Complex64> {
    if n > 2 {
        return Err(Error::Domain(format!("Hankel order {n} not supported")));
    }
    Ok(BesselSet::eval(z)?.h[n])
}

/// `J_n(z) / z^n` for `n = 0..=3`, an entire function evaluated stably at
/// small arguments (including `z = 0`).
pub fn j_scaled(z: Complex64) -> [Complex64; 4] {
    if z.norm() <= SERIES_MAX {
        let q = -(z * z) * 0.25;
        let mut out = [Complex64::new(0.0, 0.0); 4];
        let mut pow2 = 1.0;
        let mut fact = 1.0;
        for (n, slot) in out.iter_mut().enumerate() {
            if n > 0 {
                pow2 *= 2.0;
                fact *= n as f64;
            }
            let mut term = Complex64::new(1.0 / (pow2 * fact), 0.0);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut peak: f64 = 0.0;
            for k in 0..400 {
                sum += term;
                peak = peak.max(term.norm());
                if term.norm() < 1e-18 * peak && k > 2 {
                    break;
                }
                term *= q / (((k + 1) * (k + 1 + n)) as f64);
            }
            *slot = sum;
        }
        out
    } else {
        let s = BesselSet::eval(z).expect("nonzero argument");
        let mut zn = Complex64::new(1.0, 0.0);
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for n in 0..4 {
            out[n] = s.j[n] / zn;
            zn *= z;
        }
        out
    }
}

fn digamma_int(m: usize) -> f64 {
    // psi(m) for positive integer m
    -EULER_GAMMA + (1..m).map(|j| 1.0 / j as f64).sum::<f64>()
}

fn series(z: Complex64) -> BesselSet {
    let h = z * 0.5;
    let q = -(h * h);
    let lnh = h.ln();
    let mut jn = [Complex64::new(0.0, 0.0); 4];
    let mut sn = [Complex64::new(0.0, 0.0); 4];
    let mut hn = Complex64::new(1.0, 0.0);
    let mut fact_n = 1.0;
    for n in 0..4 {
        if n > 0 {
            hn *= h;
            fact_n *= n as f64;
        }
        let mut term = Complex64::new(1.0 / fact_n, 0.0);
        let mut psi_a = digamma_int(1);
        let mut psi_b = digamma_int(n + 1);
        let mut sj = Complex64::new(0.0, 0.0);
        let mut sy = Complex64::new(0.0, 0.0);
        let mut peak: f64 = 0.0;
        for k in 0..400 {
            sj += term;
            sy += term * (psi_a + psi_b);
            let mag = term.norm() * (1.0 + (psi_a + psi_b).abs());
            peak = peak.max(mag);
            if mag < 1e-18 * peak && k > 2 {
                break;
            }
            term *= q / (((k + 1) * (k + 1 + n)) as f64);
            psi_a += 1.0 / (k + 1) as f64;
            psi_b += 1.0 / (k + 1 + n) as f64;
        }
        jn[n] = hn * sj;
        sn[n] = hn * sy;
    }
    let two_pi = 2.0 / PI;
    let y0 = lnh * jn[0] * two_pi - sn[0] / PI;
    let y1_reg = lnh * jn[1] * two_pi - sn[1] / PI;
    let y1 = y1_reg - 1.0 / (PI * h);
    let y2_reg = lnh * jn[2] * two_pi - sn[2] / PI;
    let y2 = y2_reg - (Complex64::new(1.0, 0.0) / (h * h) + 1.0) / PI;
    let z2 = z * z;
    let zy1_plus = z * y1_reg;
    let z2y2_plus = z2 * y2_reg - z2 / PI;
    BesselSet {
        j: jn,
        y: [y0, y1, y2],
        h: [jn[0] + I * y0, jn[1] + I * y1, jn[2] + I * y2],
        zh1_reg: z * jn[1] + I * zy1_plus,
        z2h2_reg: z2 * jn[2] + I * z2y2_plus,
    }
}

fn miller(z: Complex64) -> BesselSet {
    let start = 2 * ((z.norm() as usize + 60) / 2);
    let mut vals = vec![Complex64::new(0.0, 0.0); start + 2];
    vals[start] = Complex64::new(1e-30, 0.0);
    for k in (1..=start).rev() {
        vals[k - 1] = vals[k] * (2.0 * k as f64) / z - vals[k + 1];
        if vals[k - 1].norm() > 1e200 {
            for v in vals.iter_mut() {
                *v *= 1e-200;
            }
        }
    }
    let mut norm = vals[0];
    for k in (2..=start).step_by(2) {
        norm += vals[k] * 2.0;
    }
    for v in vals.iter_mut() {
        *v /= norm;
    }
    let lg = (z * 0.5).ln() + EULER_GAMMA;
    let mut s0 = Complex64::new(0.0, 0.0);
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut k = 1;
    while 2 * k < start {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += vals[2 * k] * (sign / k as f64);
        s1 += (vals[2 * k - 1] - vals[2 * k + 1]) * (sign / k as f64);
        k += 1;
    }
    let two_pi = 2.0 / PI;
    let y0 = lg * vals[0] * two_pi - s0 * (4.0 / PI);
    let y1 = -vals[0] * two_pi / z + lg * vals[1] * two_pi + s1 * two_pi;
    let y2 = y1 * 2.0 / z - y0;
    let j = [vals[0], vals[1], vals[2], vals[3]];
    let h = [j[0] + I * y0, j[1] + I * y1, j[2] + I * y2];
    BesselSet {
        j,
        y: [y0, y1, y2],
        h,
        zh1_reg: z * h[1] + I * two_pi,
        z2h2_reg: z * z * h[2] + I * (2.0 * two_pi),
    }
}

fn hankel_asymptotic(nu: usize, z: Complex64) -> (Complex64, Complex64) {
    let mu4 = 4.0 * (nu * nu) as f64;
    let pre = (Complex64::new(2.0 / PI, 0.0) / z).sqrt();
    let phase = z - (nu as f64) * FRAC_PI_2 - FRAC_PI_4;
    let mut a = Complex64::new(1.0, 0.0);
    let mut sum1 = a;
    let mut sum2 = a;
    let mut ik = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        a *= (mu4 - odd * odd) / (8.0 * k as f64) / z;
        ik *= I;
        let t = a.norm();
        if t > last || t < 1e-18 {
            break;
        }
        last = t;
        sum1 += ik * a;
        sum2 += ik.conj() * a;
    }
    let h1 = pre * (I * phase).exp() * sum1;
    let h2 = pre * (-I * phase).exp() * sum2;
    (h1, h2)
}

fn asymptotic(z: Complex64) -> BesselSet {
    let mut j = [Complex64::new(0.0, 0.0); 4];
    let mut y = [Complex64::new(0.0, 0.0); 3];
    let mut h = [Complex64::new(0.0, 0.0); 3];
    for nu in 0..4 {
        let (h1, h2) = hankel_asymptotic(nu, z);
        j[nu] = (h1 + h2) * 0.5;
        if nu < 3 {
            y[nu] = (h1 - h2) / (2.0 * I);
            h[nu] = h1;
        }
    }
    BesselSet {
        j,
        y,
        h,
        zh1_reg: z * h[1] + I * (2.0 / PI),
        z2h2_reg: z * z * h[2] + I * (4.0 / PI),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Reference values from 40-digit arbitrary-precision evaluation.
    const REF: &[(f64, f64, [f64; 6])] = &[
        // (re z, im z, [J0, 0, Y0, 0, J1, Y1]) on the real axis
        (1.0, 0.0, [0.76519768655796655, 0.0, 0.088256964215676958, 0.0, 0.44005058574493352, -0.78121282130028872]),
        (0.001, 0.0, [0.99999975000001562, 0.0, -4.4714166113759233, 0.0, 0.0004999999375000026, -636.62216723113943]),
        (5.5, 0.0, [-0.0068438694178191968, 0.0, -0.33948059288191104, 0.0, -0.34143821542904335, -0.023758238956389618]),
        (12.0, 0.0, [0.047689310796833537, 0.0, -0.22523731263436143, 0.0, -0.22344710449062761, -0.057099218260896521]),
        (30.0, 0.0, [-0.086367983581040211, 0.0, -0.11729573168666403, 0.0, -0.11875106261662294, 0.084425570661747235]),
    ];

    #[test]
    fn real_axis_reference_values() {
        for &(re, im, v) in REF {
            let s = BesselSet::eval(c(re, im)).unwrap();
            let tol = 1e-12;
            let scale0 = c(v[0], v[2]).norm();
            assert!((s.j[0] - c(v[0], v[1])).norm() < tol * scale0, "J0 at {re}: {}", s.j[0]);
            assert!((s.y[0] - c(v[2], v[3])).norm() < tol * scale0, "Y0 at {re}: {}", s.y[0]);
            let scale1 = c(v[4], v[5]).norm();
            assert!((s.j[1].re - v[4]).abs() < tol * scale1, "J1 at {re}: {}", s.j[1]);
            assert!((s.y[1].re - v[5]).abs() < tol * scale1, "Y1 at {re}: {}", s.y[1]);
        }
    }

    // (re z, im z, [re H0, im H0, re H1, im H1, re H2, im H2])
    const CREF: &[(f64, f64, [f64; 6])] = &[
        (3.0, 2.0, [-0.017793270303994595, 0.05281940449715538, 0.055067595337314714, 0.024867281224750938, 0.050860554682678598, -0.05828607326644409]),
        (10.0, -1.0, [-0.67438743251961988, 0.11769233542242486, 0.083785596692754851, 0.6777198307891345, 0.67755844511642015, 0.018168731995082063]),
        (20.0, 0.5, [0.101740355614742, 0.036714197596247439, 0.039287268439106735, -0.10091925260090017, -0.098066223235070871, -0.046897976165829234]),
        (1.0e-7, 2.0e-8, [0.87433408362198457, -10.322418338680782, -1224268.7930144294, -6121343.9650734208, -47087261269791.519, -113009427047499.97]),
        (0.40000000000000002, -0.29999999999999999, [1.4521653079457993, -0.4098853807039328, 0.93422593240129416, -1.389879345585488, 4.873068105143513, -1.7955862874065231]),
        (48.0, 1.0, [-0.042230906348869959, -0.0032877718090081111, -0.003728234411284182, 0.042208129094665433, 0.042112253747874752, 0.0050489157838065709]),
    ];

    #[test]
    fn complex_argument_reference_values() {
        for &(re, im, v) in CREF {
            let s = BesselSet::eval(c(re, im)).unwrap();
            for n in 0..3 {
                let e = c(v[2 * n], v[2 * n + 1]);
                assert!((s.h[n] - e).norm() < 1e-12 * e.norm(), "H{n} at {re}+{im}i: {} vs {e}", s.h[n]);
            }
        }
    }

    #[test]
    fn h0_at_one_matches_example() {
        let h = hankel0_first_kind(c(1.0, 0.0)).unwrap();
        assert!((h - c(0.7651976866, 0.0882569642)).norm() < 1e-10);
    }

    #[test]
    fn zero_argument_is_rejected() {
        assert!(hankel0_first_kind(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn small_argument_limit() {
        let z = 1e-8;
        let h = hankel0_first_kind(c(z, 0.0)).unwrap();
        let lim = h - c(0.0, 2.0 / PI * z.ln());
        let expect = c(1.0, 2.0 / PI * (EULER_GAMMA - 2f64.ln()));
        assert!((lim - expect).norm() < 1e-12);
    }

    #[test]
    fn regimes_agree_at_switch_points() {
        for &r in &[SERIES_MAX, ASYMPTOTIC_MIN] {
            for &ang in &[0.0, 0.3, -0.4] {
                let z = Complex64::from_polar(r, ang);
                let a = if r == SERIES_MAX { series(z) } else { miller(z) };
                let b = if r == SERIES_MAX { miller(z) } else { asymptotic(z) };
                for n in 0..3 {
                    let scale = a.h[n].norm().max(a.j[n].norm());
                    assert!((a.h[n] - b.h[n]).norm() < 1e-12 * scale, "H{n} at {z}");
                    assert!((a.j[n] - b.j[n]).norm() < 1e-12 * scale.max(1.0), "J{n} at {z}");
                }
                assert!((a.j[3] - b.j[3]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn wronskian_holds_across_regimes() {
        for &r in &[0.01, 0.7, 3.0, 9.0, 14.0, 25.0, 50.0] {
            for &ang in &[0.0, 0.2, -0.2] {
                let z = Complex64::from_polar(r, ang);
                let s = BesselSet::eval(z).unwrap();
                let w = s.j[1] * s.y[0] - s.j[0] * s.y[1];
                let expect = 2.0 / (PI * z);
                let scale = (s.j[1] * s.y[0]).norm() + (s.j[0] * s.y[1]).norm();
                assert!((w - expect).norm() < 1e-13 * scale.max(expect.norm()), "Wronskian at {z}: {w}");
            }
        }
    }

    #[test]
    fn recurrence_links_orders() {
        for &r in &[0.3, 5.0, 11.0, 40.0] {
            let z = c(r, 0.1);
            let s = BesselSet::eval(z).unwrap();
            let lhs = s.h[0] + s.h[2];
            let rhs = s.h[1] * 2.0 / z;
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
            let lhs = s.j[1] + s.j[3];
            let rhs = s.j[2] * 4.0 / z;
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn regularised_combinations_are_consistent() {
        for &r in &[1e-6, 1e-3, 0.5, 4.0, 12.0, 30.0] {
            let z = c(r, 0.05 * r);
            let s = BesselSet::eval(z).unwrap();
            if r > 0.1 {
                let q = z * s.h[1] + I * (2.0 / PI);
                assert!((q - s.zh1_reg).norm() < 1e-12 * (1.0 + q.norm()));
                let w = z * z * s.h[2] + I * (4.0 / PI);
                assert!((w - s.z2h2_reg).norm() < 1e-12 * (1.0 + w.norm()));
            } else {
                // leading behaviour z^2 J_0-type terms
                let q_lead = z * z * 0.5 * (1.0 + I * (2.0 / PI) * ((z * 0.5).ln() + EULER_GAMMA - 0.5));
                assert!((s.zh1_reg - q_lead).norm() < 10.0 * r.powi(4) * (1.0 + r.ln().abs()));
                let w_lead = -I * z * z / PI;
                assert!((s.z2h2_reg - w_lead).norm() < 10.0 * r.powi(4) * (1.0 + r.ln().abs()));
            }
        }
    }

    #[test]
    fn scaled_j_limits() {
        let v = j_scaled(c(0.0, 0.0));
        let expect = [1.0, 0.5, 0.125, 1.0 / 48.0];
        for n in 0..4 {
            assert!((v[n] - expect[n]).norm() < 1e-16);
        }
        let z = c(10.0, 0.3);
        let s = BesselSet::eval(z).unwrap();
        let v = j_scaled(z);
        assert!((v[2] * z * z - s.j[2]).norm() < 1e-12);
    }

    #[test]
    fn large_argument_magnitude() {
        let z = 45.0;
        let h = hankel0_first_kind(c(z, 0.0)).unwrap();
        assert!((h.norm() / (2.0 / (PI * z)).sqrt() - 1.0).abs() < 1e-3);
    }
}
