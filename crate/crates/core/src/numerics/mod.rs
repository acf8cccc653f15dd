//! Shared numerical kernels: standard normal CDF and adaptive
//! one-dimensional quadrature.

mod erf;

pub use erf::{erf, erfc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Standard normal CDF Φ(x), absolute error below 1e-15.
///
/// Evaluated as erfc(-x/√2)/2 so that both tails go through the
/// cancellation-free erfc path. The pricer differences Φ at nearly equal
/// arguments across narrow bands, which is why a low-accuracy rational
/// approximation is not acceptable here.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Controls for the adaptive quadrature routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tolerance: f64,
    pub max_subdivisions: u32,
}

impl QuadratureSpec {
    pub fn new(abs_tolerance: f64, max_subdivisions: u32) -> Result<Self> {
        if !(abs_tolerance >= 1e-14) {
            return Err(Error::invalid(
                "quadrature.abs_tolerance",
                format!("must be >= 1e-14, got {abs_tolerance}"),
            ));
        }
        if max_subdivisions < 1 {
            return Err(Error::invalid(
                "quadrature.max_subdivisions",
                "must be >= 1",
            ));
        }
        Ok(QuadratureSpec {
            abs_tolerance,
            max_subdivisions,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tolerance: 1e-10,
            max_subdivisions: 4096,
        }
    }
}

// 15-point Gauss-Legendre nodes and weights on [-1, 1], exact for
// polynomials up to degree 29.
const GL15: [(f64, f64); 15] = [
    (-0.9879925180204854285, 0.03075324199611726835),
    (-0.9372733924007059043, 0.07036604748810812471),
    (-0.8482065834104272162, 0.107159220467171935),
    (-0.7244177313601700474, 0.1395706779261543144),
    (-0.5709721726085388475, 0.1662692058169939336),
    (-0.3941513470775633699, 0.186161000015562211),
    (-0.2011940939974345223, 0.1984314853271115765),
    (0.0, 0.2025782419255612729),
    (0.2011940939974345223, 0.1984314853271115765),
    (0.3941513470775633699, 0.186161000015562211),
    (0.5709721726085388475, 0.1662692058169939336),
    (0.7244177313601700474, 0.1395706779261543144),
    (0.8482065834104272162, 0.107159220467171935),
    (0.9372733924007059043, 0.07036604748810812471),
    (0.9879925180204854285, 0.03075324199611726835),
];

fn gl15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in GL15 {
        acc += w * f(mid + half * x);
    }
    half * acc
}

/// Adaptive Gauss-Legendre integration of `f` over `[a, b]`.
///
/// Each interval's GL15 value is compared against the sum over its two
/// halves; intervals failing their share of the tolerance are bisected.
/// Fails with [`Error::QuadratureNonConvergence`] once the subdivision
/// budget is spent.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(a <= b) {
        return Err(Error::invalid(
            "quadrature.bounds",
            format!("lower bound {a} exceeds upper bound {b}"),
        ));
    }
    if a == b {
        return Ok(0.0);
    }

    struct Interval {
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
    }

    let whole = gl15(&f, a, b);
    let mut stack = vec![Interval {
        a,
        b,
        whole,
        tol: spec.abs_tolerance,
    }];
    let mut total = 0.0;
    let mut subdivisions = 0u32;

    while let Some(iv) = stack.pop() {
        let mid = 0.5 * (iv.a + iv.b);
        let left = gl15(&f, iv.a, mid);
        let right = gl15(&f, mid, iv.b);
        let residual = (left + right - iv.whole).abs();
        if residual <= iv.tol || (iv.b - iv.a) < f64::EPSILON * (1.0 + mid.abs()) {
            total += left + right;
            continue;
        }
        subdivisions += 1;
        if subdivisions > spec.max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                max_subdivisions: spec.max_subdivisions,
                residual,
            });
        }
        let half_tol = 0.5 * iv.tol;
        stack.push(Interval {
            a: iv.a,
            b: mid,
            whole: left,
            tol: half_tol,
        });
        stack.push(Interval {
            a: mid,
            b: iv.b,
            whole: right,
            tol: half_tol,
        });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_at_zero_and_tails() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert_eq!(normal_cdf(38.0), 1.0);
        assert!(normal_cdf(-38.0) < 1e-300);
    }

    #[test]
    fn cdf_known_value() {
        // Φ(1) frozen from an independent high-precision erf evaluation
        assert!((normal_cdf(1.0) - 0.84134474606854294859).abs() < 1e-15);
    }

    #[test]
    fn cdf_symmetry_and_monotone() {
        let mut prev = 0.0;
        for i in 0..=800 {
            let x = -8.0 + 0.02 * i as f64;
            let p = normal_cdf(x);
            assert!((p + normal_cdf(-x) - 1.0).abs() <= 1e-15, "x={x}");
            assert!(p >= prev, "not monotone at x={x}");
            prev = p;
        }
    }

    #[test]
    fn integrate_constant_and_linear() {
        let spec = QuadratureSpec::default();
        assert!((integrate(|_| 1.0, 0.0, 2.0, &spec).unwrap() - 2.0).abs() < 1e-14);
        assert!((integrate(|x| x, 0.0, 1.0, &spec).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn integrate_exponential() {
        // 1 - e^{-1}, frozen from the closed-form antiderivative
        let spec = QuadratureSpec::default();
        let got = integrate(|x| (-x).exp(), 0.0, 1.0, &spec).unwrap();
        assert!((got - 0.6321205588285576784).abs() < 1e-14);
    }

    #[test]
    fn integrate_polynomial_exact() {
        // GL15 is exact through degree 29
        let spec = QuadratureSpec::default();
        let got = integrate(|x| x.powi(20) - 3.0 * x.powi(7) + x, -1.0, 2.0, &spec).unwrap();
        let exact = (2f64.powi(21) - (-1f64).powi(21)) / 21.0 - 3.0 * (2f64.powi(8) - 1.0) / 8.0
            + (4.0 - 1.0) / 2.0;
        assert!((got - exact).abs() <= 1e-12 * exact.abs());
    }

    #[test]
    fn integrate_needle_converges() {
        let spec = QuadratureSpec::default();
        let got = integrate(|x: f64| (-200.0 * (x - 0.3).powi(2)).exp(), 0.0, 1.0, &spec).unwrap();
        let exact = 0.12533141373155002512; // sqrt(pi/200) * adjustment for tails inside [0,1]
        assert!((got - exact).abs() < 1e-9);
    }

    #[test]
    fn integrate_rejects_reversed_bounds() {
        let spec = QuadratureSpec::default();
        assert!(integrate(|x| x, 1.0, 0.0, &spec).is_err());
    }

    #[test]
    fn integrate_reports_non_convergence() {
        let spec = QuadratureSpec {
            abs_tolerance: 1e-14,
            max_subdivisions: 2,
        };
        let err = integrate(|x: f64| (1e6 * x).sin() / (x + 1e-3), 0.0, 1.0, &spec);
        assert!(matches!(err, Err(Error::QuadratureNonConvergence { .. })));
    }
}
