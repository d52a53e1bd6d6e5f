//! The outgoing fundamental solution E(x; y) of Delta + k1^2 + q(x2) for
//! sources on the interface line, split into the free Hankel term, the
//! continuous-spectrum correction (a deformed-contour Fourier integral) and
//! the guided-mode sum.

use crate::channel::{
    mode_profile, u_plus_scaled, wronskian_scaled_eta, ChannelSpec, ModeSet,
};
use crate::error::{Error, Result};
use crate::quad::{adaptive, gl32};
use crate::scaled::{scaled_sum, sc_cos, sc_sinc, Scaled, C_I, C_ONE};
use crate::special::{hankel_h0, hankel_h0_deriv, lap_vertical_wavenumber};
use num_complex::Complex64;

/// Default absolute tolerance for the contour quadrature.
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;
/// Evaluation budget per contour integral.
pub const DEFAULT_QUAD_BUDGET: usize = 4_000_000;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// One piece of the deformed frequency contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourSegment {
    RealInterval { a: f64, b: f64 },
    /// Upper-half-plane semicircle around a Wronskian root, clockwise.
    Semicircle { center: f64, radius: f64 },
}

/// Which half plane the contour serves. The left half plane is handled by
/// mirroring (x1, y1), so `Minus` is informational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourSide {
    Plus,
    Minus,
}

/// The deformed integration path: the real axis with the intervals
/// [xi_n - nu, xi_n + nu] around each Wronskian root replaced by clockwise
/// semicircles in the upper half plane.
#[derive(Debug, Clone)]
pub struct Contour {
    pub segments: Vec<ContourSegment>,
    pub side: ContourSide,
    pub nu: f64,
}

impl Contour {
    /// Semicircle centers on the positive side, ascending.
    pub fn positive_centers(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .segments
            .iter()
            .filter_map(|s| match s {
                ContourSegment::Semicircle { center, .. } if *center > 0.0 => Some(*center),
                _ => None,
            })
            .collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }
}

/// Build the contour for a mode set. `nu = None` selects a quarter of the
/// smallest gap among {+-xi_n, +-k1, +-k2}, capped at 0.05 (k2 - k1).
pub fn build_contour(modes: &ModeSet, nu: Option<f64>) -> Result<Contour> {
    let spec = &modes.channel;
    let (k1, k2) = (spec.k1, spec.k2);
    let edge_tol = 1e-8 * (k2 - k1).max(1e-8);
    let mut centers = Vec::new();
    for m in &modes.modes {
        if m.xi - k1 < edge_tol || k2 - m.xi < edge_tol {
            return Err(Error::DegenerateChannel {
                value: m.xi,
                n: 0,
            });
        }
        centers.push(m.xi);
    }
    let nu = match nu {
        Some(v) => {
            if v <= 0.0 {
                return Err(Error::Domain {
                    op: "build_contour",
                    message: format!("nu must be positive, got {v}"),
                });
            }
            v
        }
        None => {
            if centers.is_empty() {
                0.0
            } else {
                let mut gap = f64::INFINITY;
                let mut pts = vec![k1, k2];
                pts.extend_from_slice(&centers);
                pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for w in pts.windows(2) {
                    gap = gap.min(w[1] - w[0]);
                }
                // the mirrored set only tightens the gap through 2 k1
                gap = gap.min(2.0 * k1);
                (0.25 * gap).min(0.05 * (k2 - k1))
            }
        }
    };
    // validate: disjoint semicircles with footprints inside (k1, k2)
    if !centers.is_empty() {
        for (i, &c) in centers.iter().enumerate() {
            if c - nu <= k1 || c + nu >= k2 {
                return Err(Error::Domain {
                    op: "build_contour",
                    message: format!("semicircle at {c} with radius {nu} leaves ({k1}, {k2})"),
                });
            }
            if i + 1 < centers.len() && centers[i + 1] - c <= 2.0 * nu {
                return Err(Error::Domain {
                    op: "build_contour",
                    message: format!("semicircles at {c} and {} overlap", centers[i + 1]),
                });
            }
        }
    }
    let mut segments = Vec::new();
    let mut cursor = f64::NEG_INFINITY;
    for &c in centers.iter().rev().map(|c| c).collect::<Vec<_>>().iter() {
        // negative side, ascending: -c - nu .. -c + nu
        let (a, b) = (-c - nu, -c + nu);
        segments.push(ContourSegment::RealInterval { a: cursor, b: a });
        segments.push(ContourSegment::Semicircle {
            center: -c,
            radius: nu,
        });
        cursor = b;
    }
    for &c in centers.iter() {
        let (a, b) = (c - nu, c + nu);
        segments.push(ContourSegment::RealInterval { a: cursor, b: a });
        segments.push(ContourSegment::Semicircle { center: c, radius: nu });
        cursor = b;
    }
    segments.push(ContourSegment::RealInterval {
        a: cursor,
        b: f64::INFINITY,
    });
    Ok(Contour {
        segments,
        side: ContourSide::Plus,
        nu,
    })
}

/// A kernel-evaluation request on the interface: target (x1 >= 0, x2),
/// source height y2, and first-derivative orders in x1 and y1.
#[derive(Debug, Clone, Copy)]
pub struct SourceKernelRequest {
    pub x1: f64,
    pub x2: f64,
    pub y2: f64,
    pub dx1_order: u8,
    pub dy1_order: u8,
}

impl SourceKernelRequest {
    pub fn value(x1: f64, x2: f64, y2: f64) -> Self {
        SourceKernelRequest {
            x1,
            x2,
            y2,
            dx1_order: 0,
            dy1_order: 0,
        }
    }
}

/// Immutable bundle of everything needed to evaluate one channel's kernels.
#[derive(Debug, Clone)]
pub struct GreensBundle {
    pub spec: ChannelSpec,
    pub modes: ModeSet,
    pub contour: Contour,
    pub tol: f64,
    pub budget: usize,
}

impl GreensBundle {
    pub fn new(spec: ChannelSpec, modes: ModeSet) -> Result<Self> {
        let contour = build_contour(&modes, None)?;
        Ok(GreensBundle {
            spec,
            modes,
            contour,
            tol: DEFAULT_QUAD_TOL,
            budget: DEFAULT_QUAD_BUDGET,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_contour(mut self, contour: Contour) -> Self {
        self.contour = contour;
        self
    }
}

/// Fourier-side correction kernel w-hat(xi, x2; 0, y2): the closed-form
/// z-integral of the outgoing 1-D resolvent against the channel potential
/// and the free vertical phase (source on the interface, y1 = 0).
///
/// All exponentials are tracked in scaled form so the evaluation stays
/// finite arbitrarily far along the evanescent tail.
pub fn tw_hat(spec: &ChannelSpec, xi: Complex64, x2: f64, y2: f64) -> Complex64 {
    tw_hat_scaled(spec, xi, x2, y2).to_complex()
}

fn tw_hat_scaled(spec: &ChannelSpec, xi: Complex64, x2: f64, y2: f64) -> Scaled {
    let q0 = spec.contrast();
    if q0 == 0.0 {
        return Scaled::ZERO;
    }
    let d = spec.d;
    let zx = spec.centered(x2);
    let zy = spec.centered(y2);
    let eta = lap_vertical_wavenumber(spec.k1, xi);
    let a2 = c64(spec.k2 * spec.k2) - xi * xi;
    let w = wronskian_scaled_eta(spec, xi, eta);

    // breakpoints of the piecewise-exponential integrand inside [-d, d]
    let mut pts = vec![-d, d];
    for p in [zx, zy] {
        if p > -d && p < d {
            pts.push(p);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let u_at_zx = u_plus_scaled(spec, xi, eta, zx);
    let u_at_neg_zx = u_plus_scaled(spec, xi, eta, -zx);
    let phase_d = Scaled::cexp(C_I * eta * d);

    let mut terms = Vec::with_capacity(pts.len());
    for pair in pts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b - a <= 0.0 {
            continue;
        }
        let mid = 0.5 * (a + b);
        // resolvent factor: which argument varies over this subinterval
        let plus_variant = mid >= zx; // z >= zx: u_+(z) u_-(zx)
        let u_const = if plus_variant { u_at_neg_zx } else { u_at_zx };
        // vertical phase e^{i eta |z - zy|}
        let (mu, e_const) = if mid >= zy {
            (C_I * eta, Scaled::cexp(-C_I * eta * zy))
        } else {
            (-C_I * eta, Scaled::cexp(C_I * eta * zy))
        };
        let anti = |z: f64| -> Scaled {
            // antiderivative of e^{mu z} [cos(A(d -+ z)) - i eta sin(A(d -+ z))/A]
            let (cv, sv, ccoef, scoef) = if plus_variant {
                // c_-(z) = cos(A(d-z)), s_-(z) = sin(A(d-z))/A
                (
                    sc_cos(a2, d - z),
                    sc_sinc(a2, d - z),
                    mu - C_I * eta,
                    -(a2 + C_I * eta * mu),
                )
            } else {
                // c_+(z) = cos(A(d+z)), s_+(z) = sin(A(d+z))/A
                (
                    sc_cos(a2, d + z),
                    sc_sinc(a2, d + z),
                    mu + C_I * eta,
                    a2 - C_I * eta * mu,
                )
            };
            let combo = cv.mul_c(ccoef).add(sv.mul_c(scoef));
            Scaled::cexp(mu * z).mul(combo)
        };
        let seg = anti(b).add(anti(a).neg());
        terms.push(seg.mul(u_const).mul(e_const));
    }
    // `anti` omits the 1/(mu^2 + A^2) = 1/q0 denominator; that factor is
    // exactly the q(z) = q0 of the source term, so the sum needs only the
    // -i/(2 eta W) prefactor of the resolvent formula.
    scaled_sum(&terms)
        .mul(phase_d)
        .mul_c(-C_I / (2.0 * eta))
        .div(w)
}

/// Contour integral (1/2 pi) int xi^pow * coeff * tw_hat * e^{i x1 xi} dxi
/// with the segment treatment described in the module docs.
fn contour_integral(
    bundle: &GreensBundle,
    x1: f64,
    x2: f64,
    y2: f64,
    pow: u8,
    coeff: Complex64,
    tol: f64,
) -> Result<Complex64> {
    let spec = &bundle.spec;
    let (k1, k2) = (spec.k1, spec.k2);
    let centers = bundle.contour.positive_centers();
    let nu = bundle.contour.nu;
    let powi = pow as i32;
    let sign = if pow % 2 == 0 { 1.0 } else { -1.0 };
    let oscillatory = x1.abs() > 1e-12;

    // folded phase for real-axis segments (negative side mapped to positive)
    let fold = move |xi: f64| -> Complex64 {
        if oscillatory {
            let p = Complex64::from_polar(1.0, x1 * xi);
            p + sign * p.conj()
        } else {
            c64(1.0 + sign)
        }
    };
    if !oscillatory && pow % 2 == 1 {
        // real segments cancel exactly; only semicircles contribute
        let mut acc = Complex64::new(0.0, 0.0);
        for &cc in &centers {
            for s in [-1.0, 1.0] {
                acc += semicircle_integral(spec, s * cc, nu, x1, x2, y2, powi);
            }
        }
        return Ok(coeff * acc / (2.0 * std::f64::consts::PI));
    }

    let f_real = |xi: f64| -> Complex64 {
        c64(xi).powi(powi) * tw_hat(spec, c64(xi), x2, y2) * fold(xi)
    };
    let n_seg = 6 + 2 * centers.len();
    let seg_tol = tol / n_seg as f64;
    let budget = bundle.budget;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut err_acc = 0.0;

    // |xi| <= k1/sqrt(2), plain
    let split = k1 / std::f64::consts::SQRT_2;
    let out = adaptive(&f_real, 0.0, split, seg_tol, budget)?;
    acc += out.value;
    err_acc += out.err;

    // k1/sqrt(2) < xi < k1 with s = sqrt(k1^2 - xi^2)
    let f_s = |s: f64| -> Complex64 {
        let xi = (k1 * k1 - s * s).sqrt();
        f_real(xi) * (s / xi)
    };
    let out = adaptive(&f_s, 0.0, (k1 * k1 - split * split).sqrt(), seg_tol, budget)?;
    acc += out.value;
    err_acc += out.err;

    // k1 < xi < first stop, with s = sqrt(xi^2 - k1^2)
    let first_stop = centers.first().map(|c| c - nu).unwrap_or(k2);
    let f_t = |s: f64| -> Complex64 {
        let xi = (k1 * k1 + s * s).sqrt();
        f_real(xi) * (s / xi)
    };
    let out = adaptive(
        &f_t,
        0.0,
        (first_stop * first_stop - k1 * k1).sqrt(),
        seg_tol,
        budget,
    )?;
    acc += out.value;
    err_acc += out.err;

    // gaps between semicircles and the run-out to k2, plain
    for i in 0..centers.len() {
        let a = centers[i] + nu;
        let b = if i + 1 < centers.len() {
            centers[i + 1] - nu
        } else {
            k2
        };
        let out = adaptive(&f_real, a, b, seg_tol, budget)?;
        acc += out.value;
        err_acc += out.err;
    }

    // semicircles, both signs, unfolded
    for &cc in &centers {
        for s in [-1.0, 1.0] {
            acc += semicircle_integral(spec, s * cc, nu, x1, x2, y2, powi);
        }
    }

    // tails
    if oscillatory {
        acc += rotated_tail(spec, x1, x2, y2, powi, 1.0, seg_tol, budget)?;
        acc += rotated_tail(spec, x1, x2, y2, powi, -1.0, seg_tol, budget)?;
    } else {
        let (v, e) = real_tail(spec, x2, y2, powi, 1.0 + sign, seg_tol, budget)?;
        acc += v;
        err_acc += e;
    }

    let _ = err_acc;
    Ok(coeff * acc / (2.0 * std::f64::consts::PI))
}

/// Clockwise upper semicircle around `center`, fixed 32-point rule in angle.
fn semicircle_integral(
    spec: &ChannelSpec,
    center: f64,
    nu: f64,
    x1: f64,
    x2: f64,
    y2: f64,
    powi: i32,
) -> Complex64 {
    let (nodes, weights) = gl32();
    let mut acc = Complex64::new(0.0, 0.0);
    for (t, w) in nodes.iter().zip(weights) {
        // theta from pi to 0, mapped from [-1, 1]
        let theta = 0.5 * std::f64::consts::PI * (1.0 - t);
        let e = Complex64::from_polar(1.0, theta);
        let xi = c64(center) + nu * e;
        let dxi = C_I * nu * e * (-0.5 * std::f64::consts::PI);
        let f = xi.powi(powi)
            * tw_hat(spec, xi, x2, y2)
            * (C_I * c64(x1) * xi).exp();
        acc += w * f * dxi;
    }
    acc
}

/// Real-axis evanescent tail with t = sqrt(xi^2 - k1^2), octave-adaptive,
/// finished by the u = 1/t transform for the algebraic remainder.
fn real_tail(
    spec: &ChannelSpec,
    x2: f64,
    y2: f64,
    powi: i32,
    fold_const: f64,
    tol: f64,
    budget: usize,
) -> Result<(Complex64, f64)> {
    let k1 = spec.k1;
    let g = |t: f64| -> Complex64 {
        let xi = (k1 * k1 + t * t).sqrt();
        c64(xi).powi(powi) * tw_hat(spec, c64(xi), x2, y2) * (fold_const * t / xi)
    };
    let t0 = (spec.k2 * spec.k2 - k1 * k1).sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut a = t0;
    let mut b = 2.0 * t0.max(1.0);
    for _ in 0..40 {
        let out = adaptive(&g, a, b, tol / 8.0, budget)?;
        acc += out.value;
        err += out.err;
        if out.value.norm() < tol / 4.0 && b > 8.0 * t0.max(1.0) {
            break;
        }
        a = b;
        b *= 2.0;
    }
    // algebraic remainder: int_b^inf g dt = int_0^{1/b} g(1/u)/u^2 du
    let h = |u: f64| -> Complex64 {
        let t = 1.0 / u;
        g(t) * (t * t)
    };
    let out = adaptive(&h, 1e-300_f64.max(1e-12 / b), 1.0 / b, tol / 8.0, budget)?;
    acc += out.value;
    err += out.err;
    Ok((acc, err))
}

/// Tail rotated 45 degrees into the upper half plane, used when the
/// oscillatory factor e^{i x1 xi} is present. `side` selects the positive
/// or negative tail; the negative one is evaluated through the evenness of
/// tw-hat at the reflected point.
fn rotated_tail(
    spec: &ChannelSpec,
    x1: f64,
    x2: f64,
    y2: f64,
    powi: i32,
    side: f64,
    tol: f64,
    budget: usize,
) -> Result<Complex64> {
    let k2 = spec.k2;
    let dir = if side > 0.0 {
        Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)
    } else {
        Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)
    };
    // positive: xi(v) = k2 + e^{i pi/4} v; negative: xi(v) = -k2 - e^{-i pi/4} v,
    // evaluated through tw(xi) = tw(-xi)
    let f = |v: f64| -> Complex64 {
        let (xi, dxi) = if side > 0.0 {
            (c64(k2) + dir * v, dir)
        } else {
            (-c64(k2) - dir * v, -dir)
        };
        let xi_eval = if side > 0.0 { xi } else { -xi };
        xi.powi(powi) * tw_hat(spec, xi_eval, x2, y2) * (C_I * c64(x1) * xi).exp() * dxi
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut a = 0.0;
    let mut b = 2.0 * k2;
    for _ in 0..40 {
        let out = adaptive(&f, a, b, tol / 8.0, budget)?;
        acc += out.value;
        if out.value.norm() < tol / 4.0 && a > 0.0 {
            return Ok(acc);
        }
        a = b;
        b *= 2.0;
    }
    Err(Error::QuadratureBudgetExceeded {
        attained: f64::NAN,
        requested: tol,
    })
}

/// Continuous-spectrum part of the correction kernel in the right half
/// plane, with derivative orders inserting (i xi)^{dx1} (-i xi)^{dy1}.
pub fn w_continuous(bundle: &GreensBundle, req: SourceKernelRequest) -> Result<Complex64> {
    if req.x1 < 0.0 {
        return Err(Error::Domain {
            op: "w_continuous",
            message: "x1 must be >= 0; mirror (x1, y1) for the left half plane".into(),
        });
    }
    if bundle.spec.is_uniform() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let pow = req.dx1_order + req.dy1_order;
    let coeff = C_I.powu(req.dx1_order as u32) * (-C_I).powu(req.dy1_order as u32);
    contour_integral(
        bundle, req.x1, req.x2, req.y2, pow, coeff, bundle.tol,
    )
}

/// Guided-mode part of the correction kernel; the residue sum over the
/// Wronskian roots, i e^{i xi_n (x1 - y1)} / (2 xi_n) per mode at y1 = 0.
pub fn w_guided(modes: &ModeSet, req: SourceKernelRequest) -> Complex64 {
    let spec = &modes.channel;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in &modes.modes {
        let xin = m.xi;
        let vx = mode_profile(m, spec, req.x2);
        let vy = mode_profile(m, spec, req.y2);
        let phase = (C_I * c64(xin * req.x1)).exp();
        let dfac = (C_I * c64(xin)).powu(req.dx1_order as u32)
            * (-C_I * c64(xin)).powu(req.dy1_order as u32);
        acc += C_I / (2.0 * xin) * dfac * vx * vy * phase;
    }
    acc
}

/// Full outgoing fundamental solution E(x; 0, y2) for a target in the
/// right half plane, optionally differentiated once in y1.
pub fn fundamental_solution(
    bundle: &GreensBundle,
    x: (f64, f64),
    y2: f64,
    dy1_order: u8,
) -> Result<Complex64> {
    let (x1, x2) = x;
    let rho = (x1 * x1 + (x2 - y2) * (x2 - y2)).sqrt();
    if rho < 1e-14 {
        return Err(Error::CoincidentSourceTarget { y2 });
    }
    let k1 = bundle.spec.k1;
    let free = match dy1_order {
        0 => C_I / 4.0 * hankel_h0(c64(k1 * rho))?,
        1 => {
            // d/dy1 (i/4) H0(k1 |x - y|) at y1 = 0
            -C_I / 4.0 * c64(k1) * hankel_h0_deriv(c64(k1 * rho))? * c64(-x1 / rho)
        }
        _ => {
            return Err(Error::Domain {
                op: "fundamental_solution",
                message: "dy1_order must be 0 or 1".into(),
            })
        }
    };
    let req = SourceKernelRequest {
        x1,
        x2,
        y2,
        dx1_order: 0,
        dy1_order,
    };
    let wc = w_continuous(bundle, req)?;
    let wg = w_guided(&bundle.modes, req);
    Ok(free + wc + wg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::find_modes;

    fn fig1_bundle(d: f64) -> GreensBundle {
        let spec = ChannelSpec::new(16.0, 18.0, d, 0.0).unwrap();
        let modes = find_modes(&spec).unwrap();
        GreensBundle::new(spec, modes).unwrap()
    }

    #[test]
    fn tw_hat_matches_frozen_quadrature_values() {
        // frozen from 30-digit adaptive quadrature of the z-integral
        let spec = ChannelSpec::new(16.0, 18.0, 0.8, 0.0).unwrap();
        let cases = [
            (10.0, 0.3, -0.2, Complex64::new(-0.032119471279174937, -0.027878557924182534)),
            (17.5, 1.1, -2.0, Complex64::new(1.4946922617496616e-6, 0.0)),
            (25.0, 0.4, 0.35, Complex64::new(0.00214296324362298, 0.0)),
            (2.0, 0.0, 0.0, Complex64::new(0.0010173505339965463, -0.0065347361949970547)),
            (120.0, 0.5, 0.1, Complex64::new(1.1405964874248859e-24, 0.0)),
        ];
        for (xi, x2, y2, want) in cases {
            let got = tw_hat(&spec, c64(xi), x2, y2);
            assert!(
                (got - want).norm() <= 1e-11 * want.norm(),
                "tw({xi}, {x2}, {y2}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn tw_hat_symmetric_and_even() {
        let spec = ChannelSpec::new(16.0, 18.0, 0.8, 0.0).unwrap();
        for (xi, x2, y2) in [(3.0, 0.5, -0.1), (12.0, 1.5, 0.2), (40.0, 0.3, 0.31)] {
            let a = tw_hat(&spec, c64(xi), x2, y2);
            let b = tw_hat(&spec, c64(xi), y2, x2);
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-30), "symmetry at {xi}");
            let m = tw_hat(&spec, c64(-xi), x2, y2);
            assert!((a - m).norm() <= 1e-12 * a.norm().max(1e-30), "evenness at {xi}");
        }
    }

    #[test]
    fn tw_hat_survives_extreme_frequencies() {
        let spec = ChannelSpec::new(16.0, 18.0, 0.8, 0.0).unwrap();
        for &xi in &[1e3, 1e5, 1e7] {
            let v = tw_hat(&spec, c64(xi), 0.4, 0.4);
            assert!(v.is_finite(), "tw at {xi} = {v}");
        }
    }

    #[test]
    fn contour_construction_fig1b() {
        let b = fig1_bundle(0.8);
        let centers = b.contour.positive_centers();
        assert_eq!(centers.len(), 5);
        let n_semi = b
            .contour
            .segments
            .iter()
            .filter(|s| matches!(s, ContourSegment::Semicircle { .. }))
            .count();
        assert_eq!(n_semi, 10);
        assert!(b.contour.nu > 0.0);
        assert!(b.contour.nu <= 0.05 * 2.0);
    }

    #[test]
    fn zero_modes_contour_is_real_line() {
        let spec = ChannelSpec::new(1.0, 1.0, 0.5, 0.0).unwrap();
        let modes = find_modes(&spec).unwrap();
        let c = build_contour(&modes, None).unwrap();
        assert_eq!(c.segments.len(), 1);
        assert!(matches!(
            c.segments[0],
            ContourSegment::RealInterval { .. }
        ));
    }

    #[test]
    fn w_continuous_zero_for_uniform() {
        let spec = ChannelSpec::new(2.0, 2.0, 0.5, 0.0).unwrap();
        let modes = find_modes(&spec).unwrap();
        let b = GreensBundle::new(spec, modes).unwrap();
        let v = w_continuous(&b, SourceKernelRequest::value(0.4, 0.3, -0.2)).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn derivative_antisymmetry_dx1_dy1() {
        let b = fig1_bundle(0.8);
        let mut rq = SourceKernelRequest::value(0.7, 0.4, -0.3);
        rq.dx1_order = 1;
        let a = w_continuous(&b, rq).unwrap();
        let mut rq2 = SourceKernelRequest::value(0.7, 0.4, -0.3);
        rq2.dy1_order = 1;
        let bb = w_continuous(&b, rq2).unwrap();
        assert!(
            (a + bb).norm() < 2e-8 * a.norm().max(1e-12),
            "dx1 {a} vs -dy1 {bb}"
        );
    }

    #[test]
    fn contour_nu_invariance() {
        let b = fig1_bundle(0.8);
        let v1 = w_continuous(&b, SourceKernelRequest::value(0.0, 0.6, -0.4)).unwrap();
        let half = build_contour(&b.modes, Some(b.contour.nu / 2.0)).unwrap();
        let b2 = b.clone().with_contour(half);
        let v2 = w_continuous(&b2, SourceKernelRequest::value(0.0, 0.6, -0.4)).unwrap();
        assert!(
            (v1 - v2).norm() < 5e-9,
            "nu invariance: {v1} vs {v2}, diff {}",
            (v1 - v2).norm()
        );
    }

    #[test]
    fn guided_part_mode_coefficient_identity() {
        // (1/(2 Bt)) int e^{-Bt |y - z|} q v_n dz = v_n(y): validates the
        // transverse structure of the residue sum by independent quadrature
        let spec = ChannelSpec::new(16.0, 18.0, 0.8, 0.0).unwrap();
        let modes = find_modes(&spec).unwrap();
        let q0 = spec.contrast();
        for m in &modes.modes {
            let bt = m.decay_rate(&spec);
            for &y in &[0.0, 0.35, -0.6, 1.4] {
                let n = 40_000;
                let h = 2.0 * spec.d / n as f64;
                let mut acc = 0.0;
                for i in 0..=n {
                    let z = -spec.d + h * i as f64;
                    let wq = if i == 0 || i == n { 0.5 } else { 1.0 };
                    acc += wq * (-bt * (y - z).abs()).exp() * q0 * mode_profile(m, &spec, z);
                }
                acc *= h / (2.0 * bt);
                let want = mode_profile(m, &spec, y);
                assert!(
                    (acc - want).abs() < 1e-7 * want.abs().max(1e-3),
                    "mode {} at y={y}: {acc} vs {want}",
                    m.xi
                );
            }
        }
    }

    #[test]
    fn fundamental_solution_free_limit() {
        let spec = ChannelSpec::new(3.0, 3.0, 0.5, 0.0).unwrap();
        let modes = find_modes(&spec).unwrap();
        let b = GreensBundle::new(spec, modes).unwrap();
        let v = fundamental_solution(&b, (0.7, 1.1), -0.4, 0).unwrap();
        let rho = (0.7f64 * 0.7 + 1.5f64 * 1.5).sqrt();
        let want = C_I / 4.0 * hankel_h0(c64(3.0 * rho)).unwrap();
        assert!((v - want).norm() < 1e-12);
    }

    #[test]
    fn fundamental_solution_reciprocity_on_interface() {
        let b = fig1_bundle(0.8);
        // reciprocity at interface points: E(0,a;0,b) = E(0,b;0,a)
        for (a, bb) in [(0.5, -0.3), (1.2, 0.1)] {
            let v1 = fundamental_solution(&b, (0.0, a), bb, 0).unwrap();
            let v2 = fundamental_solution(&b, (0.0, bb), a, 0).unwrap();
            assert!(
                (v1 - v2).norm() < 1e-8 * v1.norm(),
                "reciprocity ({a},{bb}): {v1} vs {v2}"
            );
        }
    }
}
