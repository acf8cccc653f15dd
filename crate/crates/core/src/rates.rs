//! Terminal laws of `ln S_T` under the pricing measure and zero-coupon
//! bond prices for fixed, Vasicek, and Hull-White interest rates.
//!
//! For a fixed rate the pricing measure is the risk-neutral one; for the
//! Gaussian short-rate models it is the T-forward measure, under which
//! `S_T` is lognormal with variance
//! `σ_T² = (σ₂²/a²)[T − 2B(T) + (1−e^{−2aT})/(2a)] + σ₁²T`,
//! `B(t) = (1−e^{−at})/a`. The log-mean is pinned by the martingale
//! identity `E^T[S_T] = S₀/P(0,T)` rather than transcribed, so every law
//! is forward-measure consistent by construction.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate, QuadratureSpec};

/// Market inputs shared by all rate models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    pub spot: f64,
    pub equity_vol: f64,
    pub maturity: f64,
}

impl MarketParams {
    pub fn new(spot: f64, equity_vol: f64, maturity: f64) -> Result<Self> {
        if !(spot > 0.0) || !spot.is_finite() {
            return Err(Error::invalid(
                "market.spot",
                format!("must be positive, got {spot}"),
            ));
        }
        if !(equity_vol > 0.0) || !equity_vol.is_finite() {
            return Err(Error::invalid(
                "market.equity_vol",
                format!("must be positive, got {equity_vol}"),
            ));
        }
        if !(maturity > 0.0) || !maturity.is_finite() {
            return Err(Error::invalid(
                "market.maturity",
                format!("must be positive, got {maturity}"),
            ));
        }
        Ok(MarketParams {
            spot,
            equity_vol,
            maturity,
        })
    }
}

/// Vasicek short rate `dr = (θ − a r) dt + σ₂ dW₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VasicekParams {
    pub a: f64,
    pub theta: f64,
    pub rate_vol: f64,
    pub r0: f64,
}

impl VasicekParams {
    pub fn new(a: f64, theta: f64, rate_vol: f64, r0: f64) -> Result<Self> {
        check_rate_common(a, rate_vol, r0)?;
        if !theta.is_finite() {
            return Err(Error::invalid("rate_model.theta", "must be finite"));
        }
        Ok(VasicekParams {
            a,
            theta,
            rate_vol,
            r0,
        })
    }
}

/// Drift level θ(t) for the Hull-White model.
///
/// Constant, affine, and piecewise-constant presets cover configuration
/// files; `Custom` admits any bounded callable.
#[derive(Clone)]
pub enum ThetaFn {
    Constant(f64),
    Affine {
        intercept: f64,
        slope: f64,
    },
    /// Left-continuous step function: value `values[i]` on
    /// `[times[i], times[i+1])`, extended by the last value.
    Piecewise {
        times: Vec<f64>,
        values: Vec<f64>,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl ThetaFn {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ThetaFn::Constant(v) => *v,
            ThetaFn::Affine { intercept, slope } => intercept + slope * t,
            ThetaFn::Piecewise { times, values } => {
                let i = times.partition_point(|&b| b <= t);
                if i == 0 {
                    values[0]
                } else {
                    values[i - 1]
                }
            }
            ThetaFn::Custom(f) => f(t),
        }
    }
}

impl fmt::Debug for ThetaFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaFn::Constant(v) => write!(f, "Constant({v})"),
            ThetaFn::Affine { intercept, slope } => {
                write!(f, "Affine {{ intercept: {intercept}, slope: {slope} }}")
            }
            ThetaFn::Piecewise { times, values } => {
                write!(f, "Piecewise {{ times: {times:?}, values: {values:?} }}")
            }
            ThetaFn::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Hull-White short rate `dr = (θ(t) − a r) dt + σ₂ dW₂`.
#[derive(Debug, Clone)]
pub struct HullWhiteParams {
    pub a: f64,
    pub theta: ThetaFn,
    pub rate_vol: f64,
    pub r0: f64,
}

impl HullWhiteParams {
    pub fn new(a: f64, theta: ThetaFn, rate_vol: f64, r0: f64) -> Result<Self> {
        check_rate_common(a, rate_vol, r0)?;
        if let ThetaFn::Piecewise { times, values } = &theta {
            if times.is_empty() || times.len() != values.len() {
                return Err(Error::invalid(
                    "rate_model.theta",
                    "piecewise theta needs equal, non-empty times and values",
                ));
            }
            if times.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(
                    "rate_model.theta",
                    "piecewise theta breakpoints must be strictly increasing",
                ));
            }
        }
        Ok(HullWhiteParams {
            a,
            theta,
            rate_vol,
            r0,
        })
    }
}

fn check_rate_common(a: f64, rate_vol: f64, r0: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::invalid(
            "rate_model.a",
            format!("mean-reversion speed must be positive, got {a}"),
        ));
    }
    if !(rate_vol >= 0.0) || !rate_vol.is_finite() {
        return Err(Error::invalid(
            "rate_model.rate_vol",
            format!("must be non-negative, got {rate_vol}"),
        ));
    }
    if !r0.is_finite() {
        return Err(Error::invalid("rate_model.r0", "must be finite"));
    }
    Ok(())
}

/// Interest-rate model selector.
#[derive(Debug, Clone)]
pub enum RateModel {
    Fixed { r: f64 },
    Vasicek(VasicekParams),
    HullWhite(HullWhiteParams),
}

impl RateModel {
    /// Terminal law of `ln S_T` under this model's pricing measure.
    pub fn law(&self, m: &MarketParams, spec: &QuadratureSpec) -> Result<TerminalLaw> {
        match self {
            RateModel::Fixed { r } => Ok(fixed_law(m, *r)),
            RateModel::Vasicek(v) => Ok(vasicek_law(m, v)),
            RateModel::HullWhite(h) => hw_law(m, h, spec),
        }
    }

    /// Zero-coupon bond price `P(0,T)`.
    pub fn bond(&self, maturity: f64, spec: &QuadratureSpec) -> Result<f64> {
        match self {
            RateModel::Fixed { r } => Ok((-r * maturity).exp()),
            RateModel::Vasicek(v) => Ok(vasicek_bond(v, maturity)),
            RateModel::HullWhite(h) => hw_bond(h, maturity, spec),
        }
    }
}

/// Lognormal summary of `S_T` under the pricing measure: `ln S_T` is
/// Normal(`log_mean`, `log_var`) and payoffs discount by `discount`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TerminalLaw {
    pub log_mean: f64,
    pub log_var: f64,
    pub discount: f64,
}

impl TerminalLaw {
    /// Forward price `E[S_T] = e^{log_mean + log_var/2}`; equals
    /// `S₀/P(0,T)` for every law built here.
    pub fn forward(&self) -> f64 {
        (self.log_mean + 0.5 * self.log_var).exp()
    }
}

/// `B(t) = (1 − e^{−at})/a`, via expm1 for small `at`.
fn affine_b(a: f64, t: f64) -> f64 {
    -(-a * t).exp_m1() / a
}

/// Risk-neutral lognormal law for a constant rate `r`.
pub fn fixed_law(m: &MarketParams, r: f64) -> TerminalLaw {
    let var = m.equity_vol * m.equity_vol * m.maturity;
    TerminalLaw {
        log_mean: m.spot.ln() + (r - 0.5 * m.equity_vol * m.equity_vol) * m.maturity,
        log_var: var,
        discount: (-r * m.maturity).exp(),
    }
}

/// Vasicek zero-coupon bond price.
///
/// `P(0,T) = exp{ (B(T) − T)(θ/a − σ₂²/(2a²)) − σ₂²B(T)²/(4a) − r₀B(T) }`,
/// the standard affine form. The penultimate term carries `B(T)²`; the
/// variant with a bare `B(T)` fails the Monte Carlo bond cross-check.
pub fn vasicek_bond(v: &VasicekParams, maturity: f64) -> f64 {
    let b = affine_b(v.a, maturity);
    let s2 = v.rate_vol * v.rate_vol;
    ((b - maturity) * (v.theta / v.a - 0.5 * s2 / (v.a * v.a)) - 0.25 * s2 / v.a * b * b - v.r0 * b)
        .exp()
}

/// T-forward variance of `ln S_T` shared by Vasicek and Hull-White.
fn gaussian_rate_log_var(m: &MarketParams, a: f64, rate_vol: f64) -> f64 {
    let t = m.maturity;
    let b = affine_b(a, t);
    let b2 = affine_b(2.0 * a, t); // (1 - e^{-2aT}) / (2a)
    rate_vol * rate_vol / (a * a) * (t - 2.0 * b + b2) + m.equity_vol * m.equity_vol * t
}

/// T-forward law under Vasicek rates.
pub fn vasicek_law(m: &MarketParams, v: &VasicekParams) -> TerminalLaw {
    let discount = vasicek_bond(v, m.maturity);
    let log_var = gaussian_rate_log_var(m, v.a, v.rate_vol);
    TerminalLaw {
        log_mean: (m.spot / discount).ln() - 0.5 * log_var,
        log_var,
        discount,
    }
}

/// `∫₀ᵀ θ(s) B(T−s) ds`, the Fubini collapse of the nested drift
/// integral `∫₀ᵀ e^{−at} ∫₀ᵗ θ(s)e^{as} ds dt`.
pub fn hw_theta_integral(h: &HullWhiteParams, maturity: f64, spec: &QuadratureSpec) -> Result<f64> {
    let theta = &h.theta;
    let a = h.a;
    // integrate over breakpoint-aligned pieces so step thetas stay smooth
    let mut cuts = vec![0.0, maturity];
    if let ThetaFn::Piecewise { times, .. } = theta {
        cuts.extend(times.iter().copied().filter(|&t| t > 0.0 && t < maturity));
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    }
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate(
            |s| theta.eval(s) * affine_b(a, maturity - s),
            w[0],
            w[1],
            spec,
        )?;
    }
    Ok(total)
}

/// Hull-White zero-coupon bond price.
///
/// `P(0,T) = exp{ −r₀B(T) − ∫₀ᵀ θ(s)B(T−s) ds
///               + (σ₂²/2a²)[T + (1−e^{−2aT})/(2a) − 2B(T)] }`.
/// With constant θ this reduces to [`vasicek_bond`] exactly.
pub fn hw_bond(h: &HullWhiteParams, maturity: f64, spec: &QuadratureSpec) -> Result<f64> {
    let b = affine_b(h.a, maturity);
    let b2 = affine_b(2.0 * h.a, maturity);
    let s2 = h.rate_vol * h.rate_vol;
    let drift = hw_theta_integral(h, maturity, spec)?;
    Ok((-h.r0 * b - drift + 0.5 * s2 / (h.a * h.a) * (maturity + b2 - 2.0 * b)).exp())
}

/// T-forward law under Hull-White rates.
pub fn hw_law(m: &MarketParams, h: &HullWhiteParams, spec: &QuadratureSpec) -> Result<TerminalLaw> {
    let discount = hw_bond(h, m.maturity, spec)?;
    let log_var = gaussian_rate_log_var(m, h.a, h.rate_vol);
    Ok(TerminalLaw {
        log_mean: (m.spot / discount).ln() - 0.5 * log_var,
        log_var,
        discount,
    })
}
