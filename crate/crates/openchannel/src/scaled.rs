//! Complex numbers carried as `m * exp(e)` with the real exponent split off.
//!
//! Kernel assembly evaluates products of exponentials whose exponents grow
//! linearly in the integration frequency. Individual factors overflow f64
//! long before the assembled kernel value does, so every intermediate is kept
//! as a mantissa/exponent pair and the exponent is only collapsed at the end.

use num_complex::Complex64;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

/// Value `m * exp(e)` with `m` kept at moderate magnitude.
#[derive(Debug, Clone, Copy)]
pub struct Scaled {
    pub m: Complex64,
    pub e: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { m: C_ZERO, e: 0.0 };

    pub fn new(m: Complex64, e: f64) -> Self {
        Scaled { m, e }.normalized()
    }

    pub fn from_complex(z: Complex64) -> Self {
        Scaled { m: z, e: 0.0 }.normalized()
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    /// `exp(p)` for complex `p`, exact in the exponent slot.
    pub fn cexp(p: Complex64) -> Self {
        Scaled {
            m: Complex64::from_polar(1.0, p.im),
            e: p.re,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m == C_ZERO
    }

    fn normalized(mut self) -> Self {
        if self.m == C_ZERO {
            self.e = 0.0;
            return self;
        }
        let a = self.m.norm();
        if !(1e-8..=1e8).contains(&a) {
            let s = a.ln();
            self.m /= a;
            self.e += s;
        }
        self
    }

    pub fn mul(self, o: Scaled) -> Scaled {
        Scaled {
            m: self.m * o.m,
            e: self.e + o.e,
        }
        .normalized()
    }

    pub fn mul_c(self, z: Complex64) -> Scaled {
        Scaled {
            m: self.m * z,
            e: self.e,
        }
        .normalized()
    }

    pub fn div(self, o: Scaled) -> Scaled {
        Scaled {
            m: self.m / o.m,
            e: self.e - o.e,
        }
        .normalized()
    }

    pub fn neg(self) -> Scaled {
        Scaled {
            m: -self.m,
            e: self.e,
        }
    }

    pub fn add(self, o: Scaled) -> Scaled {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let e = self.e.max(o.e);
        let m = self.m * (self.e - e).exp() + o.m * (o.e - e).exp();
        Scaled { m, e }.normalized()
    }

    /// Collapse to a plain complex number. Exponents far outside the f64
    /// range resolve to 0 or an overflow (the caller keeps exponents of
    /// physically meaningful results near 0).
    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() || self.e < -700.0 {
            return C_ZERO;
        }
        self.m * self.e.exp()
    }
}

/// Sum a slice of scaled values, rebasing to the largest exponent.
pub fn scaled_sum(terms: &[Scaled]) -> Scaled {
    let mut emax = f64::NEG_INFINITY;
    for t in terms {
        if !t.is_zero() && t.e > emax {
            emax = t.e;
        }
    }
    if emax == f64::NEG_INFINITY {
        return Scaled::ZERO;
    }
    let mut m = C_ZERO;
    for t in terms {
        if !t.is_zero() {
            let d = t.e - emax;
            if d > -700.0 {
                m += t.m * d.exp();
            }
        }
    }
    Scaled { m, e: emax }.normalized()
}

/// `expm1(z)` for complex `z`, accurate for small `|z|`.
pub fn cexpm1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        // z + z^2/2 + z^3/6 + z^4/24 + z^5/120
        let mut term = z;
        let mut sum = z;
        for k in 2..=6 {
            term = term * z / (k as f64);
            sum += term;
        }
        sum
    } else {
        // e^z - 1 via real expm1 to keep accuracy when Re z is small
        let er = z.re.exp_m1();
        let (s, c) = z.im.sin_cos();
        // e^z - 1 = e^{re}(cos + i sin) - 1 = expm1(re)*cos + (cos - 1) + i e^{re} sin
        Complex64::new(er * c + (c - 1.0), (er + 1.0) * s)
    }
}

/// cos(sqrt(a2) * w) evaluated scaled, entire in `a2`, for w >= 0.
///
/// With `g = sqrt(-a2)` chosen with non-negative real part this is
/// cosh(g w) = e^{g w} (1 + e^{-2 g w}) / 2.
pub fn sc_cos(a2: Complex64, w: f64) -> Scaled {
    let g = (-a2).sqrt(); // principal: Re >= 0
    let p = g * w;
    let m = (C_ONE + (-2.0 * p).exp_capped()) * 0.5;
    Scaled::new(m * Complex64::from_polar(1.0, p.im), p.re)
}

/// sin(sqrt(a2) w)/sqrt(a2) evaluated scaled, entire in `a2`, for w >= 0.
///
/// Equal to sinh(g w)/g with g = sqrt(-a2), Re g >= 0.
pub fn sc_sinc(a2: Complex64, w: f64) -> Scaled {
    let g = (-a2).sqrt();
    let p = g * w;
    if p.norm() < 0.5 {
        // series in p^2: w * (1 + p^2/6 + p^4/120 + ...)
        let p2 = p * p;
        let mut term = C_ONE;
        let mut sum = C_ONE;
        for k in 1..=8 {
            term = term * p2 / ((2.0 * k as f64) * (2.0 * k as f64 + 1.0));
            sum += term;
        }
        Scaled::from_complex(sum * w)
    } else {
        // (e^{p} - e^{-p}) / (2 g) = e^{p} (1 - e^{-2p}) / (2 g)
        let m = -cexpm1(-2.0 * p) / (2.0 * g);
        Scaled::new(m * Complex64::from_polar(1.0, p.im), p.re)
    }
}

trait ExpCapped {
    fn exp_capped(self) -> Complex64;
}

impl ExpCapped for Complex64 {
    /// exp(z) flushing to zero once the result cannot influence a sum
    /// against a unit-magnitude partner.
    fn exp_capped(self) -> Complex64 {
        if self.re < -700.0 {
            C_ZERO
        } else {
            self.exp()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_roundtrip_and_arith() {
        let a = Scaled::cexp(Complex64::new(3.0, 1.5));
        let b = Scaled::cexp(Complex64::new(-2.0, 0.25));
        let prod = a.mul(b).to_complex();
        let direct = Complex64::new(3.0, 1.5).exp() * Complex64::new(-2.0, 0.25).exp();
        assert!((prod - direct).norm() < 1e-14 * direct.norm());

        let s = a.add(b).to_complex();
        let sd = Complex64::new(3.0, 1.5).exp() + Complex64::new(-2.0, 0.25).exp();
        assert!((s - sd).norm() < 1e-14 * sd.norm());
    }

    #[test]
    fn huge_exponents_cancel_without_overflow() {
        // e^{900} * e^{-900} = 1, not representable factor-by-factor in f64
        let a = Scaled::cexp(Complex64::new(900.0, 0.0));
        let b = Scaled::cexp(Complex64::new(-900.0, 0.0));
        let v = a.mul(b).to_complex();
        assert!((v - C_ONE).norm() < 1e-14);
    }

    #[test]
    fn sc_cos_matches_direct_small() {
        // a2 > 0: plain cosine
        let a2 = Complex64::new(4.0, 0.0);
        let v = sc_cos(a2, 0.7).to_complex();
        assert!((v.re - (2.0f64 * 0.7).cos()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-14);
        // a2 < 0: cosh
        let a2 = Complex64::new(-9.0, 0.0);
        let v = sc_cos(a2, 0.5).to_complex();
        assert!((v.re - (3.0f64 * 0.5).cosh()).abs() < 1e-12);
    }

    #[test]
    fn sc_sinc_entire_at_zero() {
        let v = sc_sinc(Complex64::new(1e-30, 0.0), 0.9).to_complex();
        assert!((v.re - 0.9).abs() < 1e-13);
        let v = sc_sinc(Complex64::new(25.0, 0.0), 0.3).to_complex();
        assert!((v.re - (5.0f64 * 0.3).sin() / 5.0).abs() < 1e-14);
    }
}
