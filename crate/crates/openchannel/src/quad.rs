//! Adaptive Gauss–Kronrod quadrature for complex-valued integrands on real
//! intervals, plus Gauss–Legendre rules for fixed-order segment quadrature.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

/// 15-point Kronrod abscissae (positive half, descending), QUADPACK dqk15.
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];

/// 7-point Gauss weights paired with the odd Kronrod abscissae.
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

/// One G7/K15 panel: returns (kronrod value, error estimate).
pub fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = WGK[7] * fc.norm();
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        kron += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kron * h;
    let raw = ((kron - gauss) * h).norm();
    // QUADPACK-style rescaling of the raw difference
    let resabs = resabs * h.abs();
    let err = if resabs > 0.0 && raw > 0.0 {
        let scale = (200.0 * raw / resabs).powf(1.5);
        if scale < 1.0 {
            resabs * scale
        } else {
            raw
        }
    } else {
        raw
    };
    (value, err.max(f64::EPSILON * resabs))
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: Complex64,
    pub err: f64,
    pub evals: usize,
}

/// Globally adaptive bisection: split the worst panel until the summed
/// error estimate is below `tol_abs` or the evaluation budget runs out.
pub fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol_abs: f64,
    max_evals: usize,
) -> Result<QuadOutcome> {
    struct Panel {
        a: f64,
        b: f64,
        value: Complex64,
        err: f64,
    }
    if a == b {
        return Ok(QuadOutcome {
            value: Complex64::new(0.0, 0.0),
            err: 0.0,
            evals: 0,
        });
    }
    let (v0, e0) = gk15(f, a, b);
    let mut panels = vec![Panel {
        a,
        b,
        value: v0,
        err: e0,
    }];
    let mut evals = 15usize;
    loop {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= tol_abs {
            break;
        }
        if evals + 30 > max_evals {
            return Err(Error::QuadratureBudgetExceeded {
                attained: total_err,
                requested: tol_abs,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .map(|(i, p)| (i, p.err))
            .unwrap();
        let p = panels.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        if m == p.a || m == p.b {
            // interval at floating-point resolution; keep as-is
            panels.push(p);
            break;
        }
        let (v1, e1) = gk15(f, p.a, m);
        let (v2, e2) = gk15(f, m, p.b);
        evals += 30;
        panels.push(Panel {
            a: p.a,
            b: m,
            value: v1,
            err: e1,
        });
        panels.push(Panel {
            a: m,
            b: p.b,
            value: v2,
            err: e2,
        });
    }
    Ok(QuadOutcome {
        value: panels.iter().map(|p| p.value).sum(),
        err: panels.iter().map(|p| p.err).sum(),
        evals,
    })
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' at x by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Cached 32-point rule used for contour semicircles.
pub fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk15_polynomial_exact() {
        // degree-10 polynomial integrated exactly by K15
        let f = |x: f64| Complex64::new(x.powi(10), x.powi(3));
        let (v, _) = gk15(&f, 0.0, 1.0);
        assert!((v.re - 1.0 / 11.0).abs() < 1e-15);
        assert!((v.im - 0.25).abs() < 1e-15);
    }

    #[test]
    fn adaptive_oscillatory() {
        let f = |x: f64| Complex64::new((40.0 * x).cos(), 0.0);
        let out = adaptive(&f, 0.0, 1.0, 1e-12, 100_000).unwrap();
        assert!((out.value.re - (40.0f64).sin() / 40.0).abs() < 1e-11);
    }

    #[test]
    fn adaptive_endpoint_peak() {
        let f = |x: f64| Complex64::new(1.0 / (x + 1e-4).sqrt(), 0.0);
        let out = adaptive(&f, 0.0, 1.0, 1e-10, 400_000).unwrap();
        let exact = 2.0 * ((1.0f64 + 1e-4).sqrt() - 1e-2);
        assert!((out.value.re - exact).abs() < 1e-8);
    }

    #[test]
    fn budget_error_reported() {
        let f = |x: f64| Complex64::new(1.0 / (x * x + 1e-12), 0.0);
        let r = adaptive(&f, -1.0, 1.0, 1e-14, 200);
        assert!(matches!(r, Err(Error::QuadratureBudgetExceeded { .. })));
    }

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(32);
        // exact for degree 63: check a few moments
        for &p in &[0usize, 2, 10, 40, 62] {
            let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(p as i32)).sum();
            let exact = if p % 2 == 0 { 2.0 / (p as f64 + 1.0) } else { 0.0 };
            assert!((s - exact).abs() < 1e-13, "moment {p}: {s} vs {exact}");
        }
    }
}
