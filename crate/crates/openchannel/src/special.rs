//! Complex square root with the limiting-absorption branch convention and
//! the outgoing Hankel function H0^(1) used by all layer potentials.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const FRAC_2_PI: f64 = std::f64::consts::FRAC_2_PI;

/// Principal square root on C \ (-inf, 0), positive on (0, inf).
///
/// The negative real axis is rejected: callers that need the upper-side
/// limit must go through [`lap_vertical_wavenumber`] so the branch rule
/// lives in exactly one place.
pub fn branch_sqrt(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::Domain {
            op: "branch_sqrt",
            message: format!("argument {z} lies on the branch cut (-inf, 0)"),
        });
    }
    Ok(z.sqrt())
}

/// The vertical wavenumber sqrt(k^2 - xi^2) with the limiting-absorption
/// convention: for real |xi| > k the upper-side limit i*sqrt(xi^2 - k^2).
///
/// For complex `xi` (contour semicircles, rotated tails) the analytic
/// continuation i*sqrt(xi^2 - k^2) is used; all such points have
/// |Re xi| > k, where the principal square root continues the real rule.
pub fn lap_vertical_wavenumber(k: f64, xi: Complex64) -> Complex64 {
    if xi.im == 0.0 {
        let x = xi.re;
        if x.abs() <= k {
            Complex64::new((k * k - x * x).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (x * x - k * k).sqrt())
        }
    } else {
        Complex64::new(0.0, 1.0) * (xi * xi - Complex64::new(k * k, 0.0)).sqrt()
    }
}

/// Outgoing Hankel function H0^(1)(z) = J0(z) + i Y0(z), Im z >= 0.
pub fn hankel_h0(z: Complex64) -> Result<Complex64> {
    hankel(z, 0)
}

/// Derivative d/dz H0^(1)(z) = -H1^(1)(z).
pub fn hankel_h0_deriv(z: Complex64) -> Result<Complex64> {
    Ok(-hankel(z, 1)?)
}

fn hankel(z: Complex64, order: u8) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::Domain {
            op: "hankel_h0",
            message: "logarithmic singularity at z = 0".into(),
        });
    }
    let r = z.norm();
    if r <= 9.0 {
        let (j0, y0, j1, y1) = bessel_series(z);
        return Ok(match order {
            0 => j0 + Complex64::new(0.0, 1.0) * y0,
            _ => j1 + Complex64::new(0.0, 1.0) * y1,
        });
    }
    if z.im == 0.0 && z.re > 0.0 {
        let x = z.re;
        return Ok(match order {
            0 => Complex64::new(libm::j0(x), libm::y0(x)),
            _ => Complex64::new(libm::j1(x), libm::y1(x)),
        });
    }
    let (j0, y0, j1, y1) = bessel_recurrence(z);
    Ok(match order {
        0 => j0 + Complex64::new(0.0, 1.0) * y0,
        _ => j1 + Complex64::new(0.0, 1.0) * y1,
    })
}

/// Power series for J0, Y0, J1, Y1; adequate to ~1e-13 relative for |z| <= 9.
fn bessel_series(z: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
    let q = z * z * 0.25; // (z/2)^2
    let zh = z * 0.5;
    let lg = (z * 0.5).ln() + EULER_GAMMA;

    let mut term0 = Complex64::new(1.0, 0.0); // (-q)^k / (k!)^2
    let mut j0 = term0;
    let mut s0 = Complex64::new(0.0, 0.0); // sum H_k (-1)^{k+1} q^k/(k!)^2
    let mut term1 = Complex64::new(1.0, 0.0); // (-q)^k / (k!(k+1)!)
    let mut j1s = term1;
    let mut s1 = Complex64::new(1.0, 0.0); // sum (H_k + H_{k+1}) (-q)^k/(k!(k+1)!), k=0 term = 1
    let mut hk = 0.0;
    for k in 1..=40 {
        let kf = k as f64;
        term0 = -term0 * q / (kf * kf);
        j0 += term0;
        hk += 1.0 / kf;
        s0 -= term0 * hk; // (-1)^{k+1} q^k/(k!)^2 * H_k = -term0*H_k
        term1 = -term1 * q / (kf * (kf + 1.0));
        j1s += term1;
        s1 += term1 * (hk + hk + 1.0 / (kf + 1.0));
        if term0.norm() < 1e-18 * j0.norm().max(1.0) && k > 6 {
            break;
        }
    }
    let j0v = j0;
    let y0 = FRAC_2_PI * (lg * j0v + s0);
    let j1v = j1s * zh;
    let y1 = FRAC_2_PI * (lg * j1v - 1.0 / z) - std::f64::consts::FRAC_1_PI * zh * s1;
    (j0v, y0, j1v, y1)
}

/// Miller backward recurrence for the J_n ladder plus Neumann-series Y0
/// for complex arguments of moderate size (test-exercised path; the hot
/// path only sees real arguments).
fn bessel_recurrence(z: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
    let r = z.norm();
    let start = (1.3 * r + 40.0) as usize;
    let start = start + (start % 2); // even
    let mut jj = vec![Complex64::new(0.0, 0.0); start + 2];
    jj[start + 1] = Complex64::new(0.0, 0.0);
    jj[start] = Complex64::new(1e-280, 0.0);
    let two_over_z = 2.0 / z;
    for k in (1..=start).rev() {
        let next = two_over_z * (k as f64) * jj[k] - jj[k + 1];
        jj[k - 1] = next;
        if jj[k - 1].norm() > 1e250 {
            for v in jj[k - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    // normalization: J0 + 2 sum J_{2k} = 1
    let mut s = jj[0];
    let mut k = 2;
    while k <= start {
        s += 2.0 * jj[k];
        k += 2;
    }
    for v in jj.iter_mut() {
        *v /= s;
    }
    let lg = (z * 0.5).ln() + EULER_GAMMA;
    // Y0 = (2/pi)(ln(z/2)+g) J0 - (4/pi) sum (-1)^k J_{2k}/k
    let mut acc = Complex64::new(0.0, 0.0);
    let mut sign = -1.0;
    let mut k = 1usize;
    while 2 * k <= start {
        acc += sign * jj[2 * k] / (k as f64);
        sign = -sign;
        k += 1;
    }
    let y0 = FRAC_2_PI * lg * jj[0] - 2.0 * FRAC_2_PI * acc;
    // Y1 = -Y0': Y0' = (2/pi)[J0/z - (ln(z/2)+g) J1] - (4/pi) sum (-1)^k J_{2k}'/k
    let mut accd = Complex64::new(0.0, 0.0);
    let mut sign = -1.0;
    let mut k = 1usize;
    while 2 * k + 1 <= start {
        let d = 0.5 * (jj[2 * k - 1] - jj[2 * k + 1]);
        accd += sign * d / (k as f64);
        sign = -sign;
        k += 1;
    }
    let y0p = FRAC_2_PI * (jj[0] / z - lg * jj[1]) - 2.0 * FRAC_2_PI * accd;
    (jj[0], y0, jj[1], -y0p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn branch_sqrt_basics() {
        assert_eq!(branch_sqrt(c(4.0, 0.0)).unwrap(), c(2.0, 0.0));
        let v = branch_sqrt(c(0.0, 2.0)).unwrap();
        assert!((v - c(1.0, 1.0)).norm() < 1e-15);
        assert!(branch_sqrt(c(-1.0, 0.0)).is_err());
        assert_eq!(branch_sqrt(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn lap_convention_upper_side() {
        // sqrt(k^2 - xi^2) -> i sqrt(xi^2 - k^2) for |xi| > k (eqn-level identity)
        let v = lap_vertical_wavenumber(4.0, c(5.0, 0.0));
        assert!((v - c(0.0, 3.0)).norm() < 1e-14);
        let v = lap_vertical_wavenumber(5.0, c(4.0, 0.0));
        assert!((v - c(3.0, 0.0)).norm() < 1e-14);
        // continuity across a small upper-half-plane arc at |xi| > k
        let a = lap_vertical_wavenumber(4.0, c(5.0, 1e-9));
        assert!((a - c(0.0, 3.0)).norm() < 1e-7);
    }

    #[test]
    fn hankel_reference_point() {
        // frozen against an independent multiprecision evaluation
        let v = hankel_h0(c(1.0, 0.0)).unwrap();
        assert!((v - c(0.765_197_686_557_966_55, 0.088_256_964_215_676_96)).norm() < 1e-12);
    }

    #[test]
    fn hankel_small_argument_log() {
        // H0(z) ~ 1 + (2i/pi)(ln(z/2) + gamma) as z -> 0
        for &x in &[1e-8, 1e-6, 1e-4] {
            let v = hankel_h0(c(x, 0.0)).unwrap();
            let lead = c(1.0, 0.0) + c(0.0, FRAC_2_PI) * ((x / 2.0f64).ln() + EULER_GAMMA);
            assert!((v - lead).norm() < 1e-7 * v.norm());
        }
    }

    #[test]
    fn hankel_large_argument_modulus() {
        for &x in &[50.0, 400.0, 1e4] {
            let v = hankel_h0(c(x, 0.0)).unwrap();
            let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
            assert!((v.norm() / amp - 1.0).abs() < 0.01 / x);
        }
    }

    #[test]
    fn series_matches_libm_on_reals() {
        for &x in &[0.3, 1.0, 2.5, 5.0, 7.5, 8.9] {
            let (j0, y0, j1, y1) = bessel_series(c(x, 0.0));
            assert!((j0.re - libm::j0(x)).abs() < 2e-13, "j0 at {x}");
            assert!((y0.re - libm::y0(x)).abs() < 2e-13, "y0 at {x}");
            assert!((j1.re - libm::j1(x)).abs() < 2e-13, "j1 at {x}");
            assert!((y1.re - libm::y1(x)).abs() < 2e-13, "y1 at {x}");
        }
    }

    #[test]
    fn recurrence_matches_frozen_complex_values() {
        // frozen against an independent multiprecision evaluation
        let cases = [
            (c(9.5, 0.1), c(-0.174_630_060_689_786_62, 0.155_810_928_179_854_56)),
            (c(20.0, 1.0), c(0.061_942_816_323_610_84, 0.021_484_161_518_073_69)),
            (c(50.0, 5.0), c(3.417_632_628_592_648_6e-4, -6.768_061_770_715_106_3e-4)),
        ];
        for (z, want) in cases {
            let got = hankel_h0(z).unwrap();
            assert!(
                (got - want).norm() < 1e-11 * want.norm(),
                "H0({z}) = {got}, want {want}"
            );
        }
        let h1_cases = [
            (c(9.5, 0.1), c(0.146_948_250_134_589_08, 0.183_137_189_767_251_1)),
            (c(50.0, 5.0), c(-6.741_287_818_461_975_6e-4, -3.488_119_058_011_185_7e-4)),
        ];
        for (z, want) in h1_cases {
            let got = -hankel_h0_deriv(z).unwrap();
            assert!(
                (got - want).norm() < 1e-11 * want.norm(),
                "H1({z}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn split_overlap_agrees() {
        // series vs large-argument paths near the |z| = 9 split
        for &x in &[8.5, 8.9, 9.0] {
            let (j0, y0, _, _) = bessel_series(c(x, 0.0));
            assert!((j0.re - libm::j0(x)).abs() < 1e-12);
            assert!((y0.re - libm::y0(x)).abs() < 1e-12);
        }
        for &x in &[9.1, 9.5, 11.0] {
            let (j0s, y0s, j1s, y1s) = bessel_series(c(x, 0.0));
            let (j0r, y0r, j1r, y1r) = bessel_recurrence(c(x, 0.0));
            assert!((j0s - j0r).norm() < 1e-12);
            assert!((y0s - y0r).norm() < 1e-12);
            assert!((j1s - j1r).norm() < 1e-12);
            assert!((y1s - y1r).norm() < 1e-12);
        }
    }

    #[test]
    fn wronskian_identity_j_y() {
        // J0 Y0' - J0' Y0 = 2/(pi x); Y0' = -Y1, J0' = -J1
        for i in 0..200 {
            let x = 0.1 + (100.0 - 0.1) * (i as f64) / 199.0;
            let (j0, y0, j1, y1) = if x <= 9.0 {
                bessel_series(c(x, 0.0))
            } else {
                (
                    c(libm::j0(x), 0.0),
                    c(libm::y0(x), 0.0),
                    c(libm::j1(x), 0.0),
                    c(libm::y1(x), 0.0),
                )
            };
            let w = j0 * (-y1) - (-j1) * y0;
            let want = 2.0 / (std::f64::consts::PI * x);
            assert!(
                (w.re - want).abs() < 1e-11 * want.max(1.0),
                "wronskian at {x}: {} vs {want}",
                w.re
            );
        }
    }

    #[test]
    fn hankel_satisfies_bessel_ode() {
        // (d2/dz2 + (1/z) d/dz + 1) H0 = 0 by central differences
        for &x in &[0.5, 2.0, 8.0, 20.0, 50.0] {
            let h = 1e-5 * x.max(1.0);
            let f = |t: f64| hankel_h0(c(t, 0.0)).unwrap();
            let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
            let resid = d2 + d1 / x + f(x);
            assert!(
                resid.norm() < 1e-6 * f(x).norm().max(1e-3),
                "ODE residual {} at {x}",
                resid.norm()
            );
        }
    }
}
