//! One-channel spectral layer: basic ODE solutions, Wronskian, guided-mode
//! search, normalized mode profiles and the 1-D outgoing resolvent kernel.

use crate::error::{Error, Result};
use crate::scaled::{sc_cos, sc_sinc, Scaled, C_I};
use crate::special::lap_vertical_wavenumber;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative distance of 2d*sqrt(k2^2-k1^2) to pi*Z below which the channel
/// is rejected as degenerate (the Wronskian would vanish at +-k1).
pub const TOL_DEGEN: f64 = 1e-6;

/// Physical parameters of one piecewise-constant channel.
///
/// The potential is q(x2) = (k2^2 - k1^2) on [gamma-d, gamma+d], zero
/// elsewhere, with k2 >= k1 > 0 and half-width d > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub k1: f64,
    pub k2: f64,
    pub d: f64,
    pub gamma: f64,
}

impl ChannelSpec {
    pub fn new(k1: f64, k2: f64, d: f64, gamma: f64) -> Result<Self> {
        if !(k1 > 0.0) || !(k2 >= k1) || !(d > 0.0) || !gamma.is_finite() {
            return Err(Error::Domain {
                op: "ChannelSpec::new",
                message: format!("need k1 > 0, k2 >= k1, d > 0; got k1={k1}, k2={k2}, d={d}"),
            });
        }
        let spec = ChannelSpec { k1, k2, d, gamma };
        spec.check_degeneracy()?;
        Ok(spec)
    }

    /// Potential height q0 = k2^2 - k1^2.
    pub fn contrast(&self) -> f64 {
        self.k2 * self.k2 - self.k1 * self.k1
    }

    pub fn is_uniform(&self) -> bool {
        self.contrast() == 0.0
    }

    fn check_degeneracy(&self) -> Result<()> {
        if self.is_uniform() {
            return Ok(());
        }
        let theta = 2.0 * self.d * self.contrast().sqrt();
        let n = (theta / PI).round();
        if n >= 1.0 && (theta - n * PI).abs() / PI <= TOL_DEGEN {
            return Err(Error::DegenerateChannel {
                value: theta,
                n: n as i64,
            });
        }
        Ok(())
    }

    /// Shift into the channel-centered frame.
    #[inline]
    pub fn centered(&self, x2: f64) -> f64 {
        x2 - self.gamma
    }
}

/// Wronskian of the two basic solutions, in the entire-function form
/// W(xi) = -e^{2 i eta d} [ (2 xi^2 - k1^2 - k2^2) sin(2dA)/A - 2 i eta cos(2dA) ],
/// eta = sqrt(k1^2 - xi^2) with the limiting-absorption branch.
pub fn wronskian(spec: &ChannelSpec, xi: Complex64) -> Complex64 {
    wronskian_scaled(spec, xi).to_complex()
}

pub(crate) fn wronskian_scaled(spec: &ChannelSpec, xi: Complex64) -> Scaled {
    let eta = lap_vertical_wavenumber(spec.k1, xi);
    wronskian_scaled_eta(spec, xi, eta)
}

pub(crate) fn wronskian_scaled_eta(spec: &ChannelSpec, xi: Complex64, eta: Complex64) -> Scaled {
    let a2 = Complex64::new(spec.k2 * spec.k2, 0.0) - xi * xi;
    let s2 = sc_sinc(a2, 2.0 * spec.d);
    let c2 = sc_cos(a2, 2.0 * spec.d);
    let poly = 2.0 * xi * xi - Complex64::new(spec.k1 * spec.k1 + spec.k2 * spec.k2, 0.0);
    let bracket = s2.mul_c(poly).add(c2.mul_c(-2.0 * C_I * eta));
    Scaled::cexp(2.0 * C_I * eta * spec.d).mul(bracket).neg()
}

/// The basic solution normalized to e^{i eta x2} above the channel,
/// evaluated anywhere (scaled form; eta passed in so the contour's branch
/// choice is honored).
pub(crate) fn u_plus_scaled(
    spec: &ChannelSpec,
    xi: Complex64,
    eta: Complex64,
    z: f64,
) -> Scaled {
    let d = spec.d;
    let a2 = Complex64::new(spec.k2 * spec.k2, 0.0) - xi * xi;
    if z > d {
        Scaled::cexp(C_I * eta * z)
    } else if z >= -d {
        let c = sc_cos(a2, d - z);
        let s = sc_sinc(a2, d - z);
        let inner = c.add(s.mul_c(-C_I * eta));
        Scaled::cexp(C_I * eta * d).mul(inner)
    } else {
        // entire continuation below the channel
        let w = -(d + z); // > 0
        let c2 = sc_cos(a2, 2.0 * d);
        let s2 = sc_sinc(a2, 2.0 * d);
        let eb2 = eta * eta;
        let cb = sc_cos(-eb2, w); // cos(eta (d+z)) = cos(eta w), even
        let sb = sc_sinc(-eb2, w); // sin(eta w)/eta; sin(eta(d+z))/eta = -sb(w)
        // u+(z) = e^{i eta d}[ C2 cB + A^2 S2 sB + i eta (C2 sB - S2 cB) ]
        // with cB(d+z) = cb(w), sB(d+z) = -sb(w):
        //      = e^{i eta d}[ C2 cb - A^2 S2 sb - i eta (C2 sb + S2 cb) ]
        let t1 = c2.mul(cb);
        let t2 = s2.mul(sb).mul_c(-a2);
        let t3 = c2.mul(sb).mul_c(-C_I * eta);
        let t4 = s2.mul(cb).mul_c(-C_I * eta);
        let inner = t1.add(t2).add(t3).add(t4);
        Scaled::cexp(C_I * eta * d).mul(inner)
    }
}

/// Derivative of `u_plus_scaled` in the transverse coordinate.
pub(crate) fn u_plus_deriv_scaled(
    spec: &ChannelSpec,
    xi: Complex64,
    eta: Complex64,
    z: f64,
) -> Scaled {
    let d = spec.d;
    let a2 = Complex64::new(spec.k2 * spec.k2, 0.0) - xi * xi;
    if z > d {
        Scaled::cexp(C_I * eta * z).mul_c(C_I * eta)
    } else if z >= -d {
        // d/dz [cos(A(d-z)) - i eta sin(A(d-z))/A] = A^2 s + i eta c
        let c = sc_cos(a2, d - z);
        let s = sc_sinc(a2, d - z);
        let inner = s.mul_c(a2).add(c.mul_c(C_I * eta));
        Scaled::cexp(C_I * eta * d).mul(inner)
    } else {
        let w = -(d + z);
        let c2 = sc_cos(a2, 2.0 * d);
        let s2 = sc_sinc(a2, 2.0 * d);
        let eb2 = eta * eta;
        let cb = sc_cos(-eb2, w);
        let sb = sc_sinc(-eb2, w);
        // term-by-term derivative of the z < -d form:
        // u+' = e^{i eta d}[ eta^2 C2 sb + A^2 S2 cb + i eta (C2 cb - eta^2 S2 sb) ]
        let t1 = c2.mul(sb).mul_c(eb2);
        let t2 = s2.mul(cb).mul_c(a2);
        let t3 = c2.mul(cb).mul_c(C_I * eta);
        let t4 = s2.mul(sb).mul_c(-C_I * eta * eb2);
        let inner = t1.add(t2).add(t3).add(t4);
        Scaled::cexp(C_I * eta * d).mul(inner)
    }
}

/// Basic solution u_+(xi; x2) in laboratory coordinates.
pub fn u_plus(spec: &ChannelSpec, xi: Complex64, x2: f64) -> Complex64 {
    let eta = lap_vertical_wavenumber(spec.k1, xi);
    u_plus_scaled(spec, xi, eta, spec.centered(x2)).to_complex()
}

/// Mirror solution u_-(xi; x2) = u_+(xi; 2 gamma - x2).
pub fn u_minus(spec: &ChannelSpec, xi: Complex64, x2: f64) -> Complex64 {
    let eta = lap_vertical_wavenumber(spec.k1, xi);
    u_plus_scaled(spec, xi, eta, -spec.centered(x2)).to_complex()
}

pub fn u_plus_deriv(spec: &ChannelSpec, xi: Complex64, x2: f64) -> Complex64 {
    let eta = lap_vertical_wavenumber(spec.k1, xi);
    u_plus_deriv_scaled(spec, xi, eta, spec.centered(x2)).to_complex()
}

/// Transverse parity of a guided mode profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

/// One guided mode: frequency, normalization and cached root data.
#[derive(Debug, Clone)]
pub struct GuidedMode {
    /// Mode frequency in (k1, k2).
    pub xi: f64,
    /// Multiplies u_+(xi_n, .) to unit L2 norm.
    pub norm_const: f64,
    pub parity: Parity,
    /// |W(xi_n)| after polishing.
    pub wronskian_residual: f64,
    /// d/dxi W at the root (real), from a complex-step derivative.
    pub w_xi: f64,
    /// u_+(xi_n; -d) in centered coordinates (real at a root).
    u_at_minus_d: f64,
}

impl GuidedMode {
    /// Transverse decay rate sqrt(xi^2 - k1^2) outside the channel.
    pub fn decay_rate(&self, spec: &ChannelSpec) -> f64 {
        (self.xi * self.xi - spec.k1 * spec.k1).sqrt()
    }
}

/// The guided modes of one channel, ascending in frequency.
#[derive(Debug, Clone)]
pub struct ModeSet {
    pub modes: Vec<GuidedMode>,
    pub channel: ChannelSpec,
}

impl ModeSet {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// Real dispersion function on (k1, k2) whose zeros are the mode
/// frequencies: g(xi) = (2xi^2-k1^2-k2^2) sin(2dA)/A + 2 Bt cos(2dA).
pub fn dispersion(spec: &ChannelSpec, xi: f64) -> f64 {
    let a2 = spec.k2 * spec.k2 - xi * xi;
    let bt = (xi * xi - spec.k1 * spec.k1).max(0.0).sqrt();
    let (s2, c2) = real_sinc_cos(a2, 2.0 * spec.d);
    (2.0 * xi * xi - spec.k1 * spec.k1 - spec.k2 * spec.k2) * s2 + 2.0 * bt * c2
}

/// (sin(w sqrt(a2))/sqrt(a2), cos(w sqrt(a2))) for real a2 >= 0, stable at 0.
fn real_sinc_cos(a2: f64, w: f64) -> (f64, f64) {
    if a2 > 1e-12 {
        let a = a2.sqrt();
        ((a * w).sin() / a, (a * w).cos())
    } else {
        let p2 = a2 * w * w;
        (w * (1.0 - p2 / 6.0 + p2 * p2 / 120.0), 1.0 - p2 / 2.0 + p2 * p2 / 24.0)
    }
}

/// Find all guided modes of the channel.
///
/// The dispersion function is sampled on a uniform grid sized from the
/// known oscillation count, sign changes are bisected to 1e-13 and each
/// root gets one Newton polish.
pub fn find_modes(spec: &ChannelSpec) -> Result<ModeSet> {
    spec.check_degeneracy()?;
    if spec.is_uniform() {
        return Ok(ModeSet {
            modes: Vec::new(),
            channel: *spec,
        });
    }
    let theta = 2.0 * spec.d * spec.contrast().sqrt();
    let n_grid = 64.max(16 * (theta / PI).ceil() as usize);
    let lo = spec.k1;
    let hi = spec.k2;
    let step = (hi - lo) / n_grid as f64;
    let mut roots = Vec::new();
    let mut prev_x = lo;
    let mut prev_g = dispersion(spec, prev_x);
    for i in 1..=n_grid {
        let x = lo + step * i as f64;
        let g = dispersion(spec, x);
        if prev_g == 0.0 {
            roots.push(prev_x);
        } else if prev_g * g < 0.0 {
            roots.push(bisect(spec, prev_x, x)?);
        }
        prev_x = x;
        prev_g = g;
    }
    let mut modes = Vec::with_capacity(roots.len());
    for xi in roots {
        modes.push(make_mode(spec, xi)?);
    }
    modes.sort_by(|a, b| a.xi.partial_cmp(&b.xi).unwrap());
    Ok(ModeSet {
        modes,
        channel: *spec,
    })
}

fn bisect(spec: &ChannelSpec, mut a: f64, mut b: f64) -> Result<f64> {
    let mut ga = dispersion(spec, a);
    let tol = 1e-13 * spec.k2.max(1.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a < tol {
            return Ok(newton_polish(spec, m));
        }
        let gm = dispersion(spec, m);
        if gm == 0.0 {
            return Ok(newton_polish(spec, m));
        }
        if ga * gm < 0.0 {
            b = m;
        } else {
            a = m;
            ga = gm;
        }
    }
    Err(Error::RootPolishFailure { xi: 0.5 * (a + b) })
}

fn newton_polish(spec: &ChannelSpec, xi: f64) -> f64 {
    let h = 1e-7 * spec.k2.max(1.0);
    let dg = (dispersion(spec, xi + h) - dispersion(spec, xi - h)) / (2.0 * h);
    if dg == 0.0 {
        return xi;
    }
    let next = xi - dispersion(spec, xi) / dg;
    if next > spec.k1 && next < spec.k2 {
        next
    } else {
        xi
    }
}

fn make_mode(spec: &ChannelSpec, xi: f64) -> Result<GuidedMode> {
    let resid = wronskian(spec, Complex64::new(xi, 0.0)).norm();
    let threshold = 1e-10 * spec.k2.max(1.0) * spec.k2.max(1.0);
    if resid > threshold {
        return Err(Error::RootPolishFailure { xi });
    }
    let d = spec.d;
    let bt = (xi * xi - spec.k1 * spec.k1).sqrt();
    let a2 = spec.k2 * spec.k2 - xi * xi;
    let (s2, c2) = real_sinc_cos(a2, 2.0 * d);
    let u_md = (-bt * d).exp() * (c2 + bt * s2);
    // || u_+ ||^2 = e^{-2 Bt d}/(2 Bt) + u_+(-d)^2/(2 Bt) + e^{-2 Bt d} * J
    let w = 2.0 * d;
    let (sw, cw) = real_sinc_cos(a2, w); // sin(Aw)/A, cos(Aw)
    // J = int_0^w [cos(A t) + (Bt/A) sin(A t)]^2 dt with A^2 = a2
    let sin2aw_over_4a = 0.5 * sw * cw; // sin(2Aw)/(4A) = sin(Aw)cos(Aw)/(2A) * ... = (sw*cw)/2
    let sin_sq_over_a2 = sw * sw; // sin^2(Aw)/A^2
    let j = 0.5 * w + sin2aw_over_4a + bt * sin_sq_over_a2
        + (bt * bt / a2_guard(a2)) * (0.5 * w - sin2aw_over_4a);
    let tail = (-2.0 * bt * d).exp() / (2.0 * bt);
    let norm_sq = tail + u_md * u_md / (2.0 * bt) + (-2.0 * bt * d).exp() * j;
    let norm_const = 1.0 / norm_sq.sqrt();
    // parity: u_+ = c u_- with c = e^{-Bt d}/u_+(-d) = +-1 at a root
    let c = (-bt * d).exp() / u_md;
    let parity = if c > 0.0 {
        Parity::Symmetric
    } else {
        Parity::Antisymmetric
    };
    // complex-step derivative of W at the root
    let h = 1e-20 * xi.max(1.0);
    let wc = wronskian(spec, Complex64::new(xi, h));
    let w_xi = wc.im / h;
    Ok(GuidedMode {
        xi,
        norm_const,
        parity,
        wronskian_residual: resid,
        w_xi,
        u_at_minus_d: u_md,
    })
}

fn a2_guard(a2: f64) -> f64 {
    if a2.abs() < 1e-300 {
        1e-300
    } else {
        a2
    }
}

/// Real normalized transverse profile v_n(x2), unit L2 norm.
pub fn mode_profile(mode: &GuidedMode, spec: &ChannelSpec, x2: f64) -> f64 {
    let z = spec.centered(x2);
    let d = spec.d;
    let bt = mode.decay_rate(spec);
    let u = if z > d {
        (-bt * z).exp()
    } else if z >= -d {
        let a2 = spec.k2 * spec.k2 - mode.xi * mode.xi;
        let (s, c) = real_sinc_cos(a2, d - z);
        (-bt * d).exp() * (c + bt * s)
    } else {
        mode.u_at_minus_d * (bt * (z + d)).exp()
    };
    u * mode.norm_const
}

/// Outgoing 1-D resolvent kernel K(x2, y2) = u_+(max) u_-(min) / W.
pub fn resolvent_kernel(
    spec: &ChannelSpec,
    xi: Complex64,
    x2: f64,
    y2: f64,
) -> Result<Complex64> {
    let w = wronskian_scaled(spec, xi);
    let wc = w.to_complex();
    let near_pole_threshold = 1e-8 * spec.k2.max(1.0) * spec.k2.max(1.0);
    if wc.norm() < near_pole_threshold {
        // locate the nearest root for the report
        let dist = if xi.im == 0.0 { wc.norm() } else { f64::NAN };
        return Err(Error::NearPole {
            xi: xi.re,
            dist,
        });
    }
    let eta = lap_vertical_wavenumber(spec.k1, xi);
    let zx = spec.centered(x2);
    let zy = spec.centered(y2);
    let hi = zx.max(zy);
    let lo = zx.min(zy);
    let up = u_plus_scaled(spec, xi, eta, hi);
    let um = u_plus_scaled(spec, xi, eta, -lo);
    Ok(up.mul(um).div(w).to_complex())
}
