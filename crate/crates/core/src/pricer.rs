//! Closed-form option prices: lognormal partial expectations assembled
//! band by band over the strategy payoff and discounted.
//!
//! Every band contributes a stock leg (affine coefficient times the
//! partial expectation of `S_T` over the band) and a cash leg (constant
//! times the band's probability mass). Band sums use compensated
//! accumulation so the 1e-12 decomposition contract is independent of
//! evaluation order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::normal_cdf;
use crate::rates::TerminalLaw;
use crate::strategy::{Band, CallStrategy, PutStrategy};

/// Variance floor below which the lognormal is treated as a point mass
/// at the forward.
const DEGENERATE_VAR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

/// Price plus its per-band decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceBreakdown {
    /// Discounted total, `discount * sum of band legs`.
    pub price: f64,
    /// `e^{-rT}` or `P(0,T)`.
    pub discount: f64,
    /// `(band, stock leg, cash leg)` per band, undiscounted.
    pub band_terms: Vec<(Band, f64, f64)>,
    /// Normal CDF arguments used, two per leg per band, in band order.
    pub d_arguments: Vec<f64>,
}

struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn new() -> Self {
        Kahan {
            sum: 0.0,
            carry: 0.0,
        }
    }
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Probability mass and partial expectation `E[S_T 1{lower < S_T < upper}]`
/// of the lognormal law over a price band.
///
/// `lower = 0` and `upper = +inf` map to the full half-lines in log
/// space.
pub fn lognormal_band_moments(law: &TerminalLaw, lower: f64, upper: f64) -> Result<(f64, f64)> {
    if !(lower >= 0.0) || !(lower < upper) {
        return Err(Error::invalid(
            "band.bounds",
            format!("need 0 <= lower < upper, got [{lower}, {upper}]"),
        ));
    }
    let sigma = law.log_var.sqrt();
    let lo = if lower == 0.0 {
        f64::NEG_INFINITY
    } else {
        lower.ln()
    };
    let hi = if upper == f64::INFINITY {
        f64::INFINITY
    } else {
        upper.ln()
    };
    let mass = normal_cdf((hi - law.log_mean) / sigma) - normal_cdf((lo - law.log_mean) / sigma);
    let pe = law.forward()
        * (normal_cdf((hi - law.log_mean - law.log_var) / sigma)
            - normal_cdf((lo - law.log_mean - law.log_var) / sigma));
    Ok((mass, pe))
}

// One affine payoff piece: value = stock_coef * S_T + cash_coef on
// (lower, upper).
struct Segment {
    band: Band,
    lower: f64,
    upper: f64,
    stock_coef: f64,
    cash_coef: f64,
}

fn call_segments(s: &CallStrategy) -> Vec<Segment> {
    let pf = s.payoff_fn();
    let levels = pf.ladder().levels().to_vec();
    let n = s.n_trades();
    let mut segs = Vec::with_capacity(n as usize + 1);
    segs.push(Segment {
        band: Band::Vanilla,
        lower: s.strike(),
        upper: levels[0],
        stock_coef: 1.0,
        cash_coef: -s.strike(),
    });
    for m in 1..n {
        let (stock, cash) = pf.band_coefficients(m);
        segs.push(Segment {
            band: Band::Band(m),
            lower: levels[m as usize - 1],
            upper: levels[m as usize],
            stock_coef: stock,
            cash_coef: cash,
        });
    }
    let (stock, cash) = pf.band_coefficients(n);
    segs.push(Segment {
        band: Band::Saturated,
        lower: levels[n as usize - 1],
        upper: f64::INFINITY,
        stock_coef: stock,
        cash_coef: cash,
    });
    segs
}

fn put_segments(s: &PutStrategy) -> Result<Vec<Segment>> {
    let pf = s.payoff_fn()?;
    let levels = pf.ladder().levels().to_vec();
    let n = s.n_trades();
    let mut segs = Vec::with_capacity(n as usize + 1);
    let (stock, cash) = pf.band_coefficients(n);
    segs.push(Segment {
        band: Band::Saturated,
        lower: 0.0,
        upper: levels[n as usize - 1],
        stock_coef: stock,
        cash_coef: cash,
    });
    for m in (1..n).rev() {
        let (stock, cash) = pf.band_coefficients(m);
        segs.push(Segment {
            band: Band::Band(m),
            lower: levels[m as usize],
            upper: levels[m as usize - 1],
            stock_coef: stock,
            cash_coef: cash,
        });
    }
    segs.push(Segment {
        band: Band::Vanilla,
        lower: levels[0],
        upper: s.strike(),
        stock_coef: -1.0,
        cash_coef: s.strike(),
    });
    Ok(segs)
}

fn price_segments(
    segs: &[Segment],
    law: &TerminalLaw,
    payoff_at: impl Fn(f64) -> f64,
) -> Result<PriceBreakdown> {
    // point-mass degeneration: all mass sits at the forward
    if law.log_var < DEGENERATE_VAR {
        let forward = law.forward();
        return Ok(PriceBreakdown {
            price: law.discount * payoff_at(forward),
            discount: law.discount,
            band_terms: Vec::new(),
            d_arguments: Vec::new(),
        });
    }
    let sigma = law.log_var.sqrt();
    let mut band_terms = Vec::with_capacity(segs.len());
    let mut d_arguments = Vec::with_capacity(4 * segs.len());
    let mut acc = Kahan::new();
    for seg in segs {
        let (mass, pe) = lognormal_band_moments(law, seg.lower, seg.upper)?;
        let stock_leg = seg.stock_coef * pe;
        let cash_leg = seg.cash_coef * mass;
        acc.add(stock_leg);
        acc.add(cash_leg);
        band_terms.push((seg.band, stock_leg, cash_leg));
        let lo = if seg.lower == 0.0 {
            f64::NEG_INFINITY
        } else {
            seg.lower.ln()
        };
        let hi = if seg.upper == f64::INFINITY {
            f64::INFINITY
        } else {
            seg.upper.ln()
        };
        d_arguments.push((hi - law.log_mean - law.log_var) / sigma);
        d_arguments.push((lo - law.log_mean - law.log_var) / sigma);
        d_arguments.push((hi - law.log_mean) / sigma);
        d_arguments.push((lo - law.log_mean) / sigma);
    }
    Ok(PriceBreakdown {
        price: law.discount * acc.sum,
        discount: law.discount,
        band_terms,
        d_arguments,
    })
}

/// Closed-form call price under the given terminal law.
pub fn call_price(s: &CallStrategy, law: &TerminalLaw) -> Result<PriceBreakdown> {
    let pf = s.payoff_fn();
    price_segments(&call_segments(s), law, |x| pf.eval(x))
}

/// Closed-form put price under the given terminal law.
pub fn put_price(s: &PutStrategy, law: &TerminalLaw) -> Result<PriceBreakdown> {
    let pf = s.payoff_fn()?;
    price_segments(&put_segments(s)?, law, |x| pf.eval(x))
}

/// Vanilla (β = 0) reference price computed from the same lognormal
/// band machinery.
pub fn vanilla_price(kind: OptionKind, strike: f64, law: &TerminalLaw) -> Result<f64> {
    if !(strike > 0.0) {
        return Err(Error::invalid(
            "vanilla.strike",
            format!("must be positive, got {strike}"),
        ));
    }
    if law.log_var < DEGENERATE_VAR {
        let forward = law.forward();
        let intrinsic = match kind {
            OptionKind::Call => (forward - strike).max(0.0),
            OptionKind::Put => (strike - forward).max(0.0),
        };
        return Ok(law.discount * intrinsic);
    }
    Ok(match kind {
        OptionKind::Call => {
            let (mass, pe) = lognormal_band_moments(law, strike, f64::INFINITY)?;
            law.discount * (pe - strike * mass)
        }
        OptionKind::Put => {
            let (mass, pe) = lognormal_band_moments(law, 0.0, strike)?;
            law.discount * (strike * mass - pe)
        }
    })
}

/// Probability mass of every payoff region for a call, including the
/// out-of-money region below the strike. Sums to 1.
pub fn call_band_masses(s: &CallStrategy, law: &TerminalLaw) -> Result<Vec<(Band, f64)>> {
    let mut out = Vec::with_capacity(s.n_trades() as usize + 2);
    let (oom, _) = lognormal_band_moments(law, 0.0, s.strike())?;
    out.push((Band::OutOfMoney, oom));
    for seg in call_segments(s) {
        let (mass, _) = lognormal_band_moments(law, seg.lower, seg.upper)?;
        out.push((seg.band, mass));
    }
    Ok(out)
}

/// Probability mass of every payoff region for a put, including the
/// out-of-money region above the strike. Sums to 1.
pub fn put_band_masses(s: &PutStrategy, law: &TerminalLaw) -> Result<Vec<(Band, f64)>> {
    let mut out = Vec::with_capacity(s.n_trades() as usize + 2);
    for seg in put_segments(s)? {
        let (mass, _) = lognormal_band_moments(law, seg.lower, seg.upper)?;
        out.push((seg.band, mass));
    }
    let (oom, _) = lognormal_band_moments(law, s.strike(), f64::INFINITY)?;
    out.push((Band::OutOfMoney, oom));
    Ok(out)
}
