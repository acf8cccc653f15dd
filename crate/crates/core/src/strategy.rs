//! Trade ladders and the exact piecewise payoff functions for calls and
//! puts under the discrete linear investment strategy.
//!
//! The option holder trades the underlying in `N` equal capital tranches
//! at equally spaced levels `S_n = K ± nΔ` with `Δ = αK/N`, ramping total
//! exposure from 0 to `β`. Hedging income makes the resulting intrinsic
//! value piecewise affine in the terminal price, one affine piece per
//! band between consecutive ladder levels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Call-side strategy parameters: the holder buys on the way up from `K`
/// to `(1+α)K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CallStrategy {
    alpha: f64,
    beta: f64,
    n_trades: u32,
    strike: f64,
}

/// Put-side strategy parameters: the holder sells on the way down from
/// `K` to `(1-α)K`.
///
/// `trigger_offset` (δ) is carried for interface completeness but must be
/// zero for ladder construction and pricing; the closed-form band
/// formulas are written with levels `K - nΔ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PutStrategy {
    alpha: f64,
    beta: f64,
    n_trades: u32,
    strike: f64,
    #[serde(default)]
    trigger_offset: f64,
}

/// Which side of the strike the ladder sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LadderDirection {
    Ascending,
    Descending,
}

/// The ordered trade levels `S_1 .. S_N` with their constant spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeLadder {
    levels: Vec<f64>,
    spacing: f64,
    direction: LadderDirection,
}

/// Region of the terminal price relative to strike and ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Band {
    /// Payoff is zero: below strike for calls, above strike for puts.
    OutOfMoney,
    /// Between the strike and the first trade level; plain intrinsic value.
    Vanilla,
    /// Between levels `S_m` and `S_{m+1}`, `1 <= m <= N-1`.
    Band(u32),
    /// Beyond the last trade level; all `N` trades have executed.
    Saturated,
}

fn check_common(alpha: f64, beta: f64, n_trades: u32, strike: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(
            "strategy.alpha",
            format!("must be a positive finite real, got {alpha}"),
        ));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::invalid(
            "strategy.beta",
            format!("must lie in [0, 1], got {beta}"),
        ));
    }
    if n_trades < 1 {
        return Err(Error::invalid("strategy.n_trades", "must be >= 1"));
    }
    if !(strike > 0.0) || !strike.is_finite() {
        return Err(Error::invalid(
            "strategy.strike",
            format!("must be a positive finite real, got {strike}"),
        ));
    }
    Ok(())
}

impl CallStrategy {
    pub fn new(alpha: f64, beta: f64, n_trades: u32, strike: f64) -> Result<Self> {
        check_common(alpha, beta, n_trades, strike)?;
        Ok(CallStrategy {
            alpha,
            beta,
            n_trades,
            strike,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn n_trades(&self) -> u32 {
        self.n_trades
    }
    pub fn strike(&self) -> f64 {
        self.strike
    }

    /// Level spacing Δ = αK/N.
    pub fn spacing(&self) -> f64 {
        self.alpha * self.strike / self.n_trades as f64
    }

    /// Ascending ladder `S_n = K + nΔ`, ending at `(1+α)K`.
    pub fn ladder(&self) -> TradeLadder {
        let delta = self.spacing();
        let levels = (1..=self.n_trades)
            .map(|n| self.strike + n as f64 * delta)
            .collect();
        TradeLadder {
            levels,
            spacing: delta,
            direction: LadderDirection::Ascending,
        }
    }

    /// Intrinsic value at terminal price `s_t`, per unit share.
    ///
    /// On band `m` the value is
    /// `S_T (1 - (βK/N) Σ_{n=1}^m 1/(K+nΔ)) + (βm/N - 1) K`,
    /// the plain intrinsic value net of hedging income from the `m`
    /// trades already executed.
    pub fn payoff(&self, s_t: f64) -> f64 {
        self.payoff_fn().eval(s_t)
    }

    /// Precomputes the per-band affine coefficients for repeated
    /// evaluation (Monte Carlo hot path).
    pub fn payoff_fn(&self) -> PayoffFn {
        let delta = self.spacing();
        let n = self.n_trades as f64;
        let k = self.strike;
        // partial sums of 1/S_n
        let mut stock = Vec::with_capacity(self.n_trades as usize);
        let mut cash = Vec::with_capacity(self.n_trades as usize);
        let mut sum = 0.0;
        for m in 1..=self.n_trades {
            sum += 1.0 / (k + m as f64 * delta);
            stock.push(1.0 - self.beta * k / n * sum);
            cash.push((self.beta * m as f64 / n - 1.0) * k);
        }
        PayoffFn {
            kind: PayoffKind::Call,
            strike: k,
            ladder: self.ladder(),
            stock_coef: stock,
            cash_coef: cash,
        }
    }
}

impl PutStrategy {
    pub fn new(
        alpha: f64,
        beta: f64,
        n_trades: u32,
        strike: f64,
        trigger_offset: f64,
    ) -> Result<Self> {
        check_common(alpha, beta, n_trades, strike)?;
        if !(0.0..strike).contains(&trigger_offset) {
            return Err(Error::invalid(
                "strategy.trigger_offset",
                format!("must lie in [0, strike), got {trigger_offset}"),
            ));
        }
        Ok(PutStrategy {
            alpha,
            beta,
            n_trades,
            strike,
            trigger_offset,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn n_trades(&self) -> u32 {
        self.n_trades
    }
    pub fn strike(&self) -> f64 {
        self.strike
    }
    pub fn trigger_offset(&self) -> f64 {
        self.trigger_offset
    }

    /// Level spacing Δ = αK/N.
    pub fn spacing(&self) -> f64 {
        self.alpha * self.strike / self.n_trades as f64
    }

    /// Descending ladder `S_n = K - nΔ`, ending at `(1-α)K`.
    ///
    /// Rejects a nonzero trigger offset (the band formulas assume levels
    /// `K - nΔ`) and `α >= 1`, which would push the last level to or
    /// below zero.
    pub fn ladder(&self) -> Result<TradeLadder> {
        if self.trigger_offset != 0.0 {
            return Err(Error::invalid(
                "strategy.trigger_offset",
                format!(
                    "must be 0 for ladder construction and pricing, got {}",
                    self.trigger_offset
                ),
            ));
        }
        if self.alpha >= 1.0 {
            return Err(Error::invalid(
                "strategy.alpha",
                format!(
                    "degenerate ladder: alpha {} >= 1 makes the last level (1-alpha)K non-positive",
                    self.alpha
                ),
            ));
        }
        let delta = self.spacing();
        let levels = (1..=self.n_trades)
            .map(|n| self.strike - n as f64 * delta)
            .collect();
        Ok(TradeLadder {
            levels,
            spacing: delta,
            direction: LadderDirection::Descending,
        })
    }

    /// Intrinsic value at terminal price `s_t`, per unit share.
    ///
    /// On band `m`: `(1 - βm/N) K - S_T + (βS_T K/N) Σ_{n=1}^m 1/(K-nΔ)`.
    /// At or below the last level the sum runs over all `N` trades, which
    /// is what continuity at `S_N` requires.
    pub fn payoff(&self, s_t: f64) -> Result<f64> {
        Ok(self.payoff_fn()?.eval(s_t))
    }

    /// Precomputes the per-band affine coefficients for repeated
    /// evaluation (Monte Carlo hot path).
    pub fn payoff_fn(&self) -> Result<PayoffFn> {
        let ladder = self.ladder()?;
        let n = self.n_trades as f64;
        let k = self.strike;
        let mut stock = Vec::with_capacity(self.n_trades as usize);
        let mut cash = Vec::with_capacity(self.n_trades as usize);
        let mut sum = 0.0;
        for (m, level) in ladder.levels.iter().enumerate() {
            sum += 1.0 / level;
            stock.push(-(1.0 - self.beta * k / n * sum));
            cash.push((1.0 - self.beta * (m as f64 + 1.0) / n) * k);
        }
        Ok(PayoffFn {
            kind: PayoffKind::Put,
            strike: k,
            ladder,
            stock_coef: stock,
            cash_coef: cash,
        })
    }
}

impl TradeLadder {
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn direction(&self) -> LadderDirection {
        self.direction
    }
    pub fn n_trades(&self) -> u32 {
        self.levels.len() as u32
    }
    /// First trade level `S_1`.
    pub fn first(&self) -> f64 {
        self.levels[0]
    }
    /// Last trade level `S_N`.
    pub fn last(&self) -> f64 {
        *self.levels.last().unwrap()
    }
}

/// Locates the band containing `s_t`.
///
/// Call bands are left-closed `[S_m, S_{m+1})`, put bands are
/// right-closed `(S_{m+1}, S_m]`, matching the printed inequalities. The
/// payoff is continuous across boundaries so the convention only pins
/// down which descriptor a boundary point reports.
pub fn band_index(s_t: f64, ladder: &TradeLadder, strike: f64) -> Band {
    let n = ladder.levels.len() as u32;
    match ladder.direction {
        LadderDirection::Ascending => {
            if s_t < strike {
                Band::OutOfMoney
            } else if s_t < ladder.first() {
                Band::Vanilla
            } else if s_t >= ladder.last() {
                Band::Saturated
            } else {
                // S_m <= s_t < S_{m+1}
                let m = ladder.levels.partition_point(|&l| l <= s_t) as u32;
                debug_assert!(m >= 1 && m < n);
                Band::Band(m)
            }
        }
        LadderDirection::Descending => {
            if s_t > strike {
                Band::OutOfMoney
            } else if s_t > ladder.first() {
                Band::Vanilla
            } else if s_t <= ladder.last() {
                Band::Saturated
            } else {
                // S_{m+1} < s_t <= S_m
                let m = ladder.levels.partition_point(|&l| l >= s_t) as u32;
                debug_assert!(m >= 1 && m < n);
                Band::Band(m)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PayoffKind {
    Call,
    Put,
}

/// Piecewise-affine intrinsic value with precomputed band coefficients.
#[derive(Debug, Clone)]
pub struct PayoffFn {
    kind: PayoffKind,
    strike: f64,
    ladder: TradeLadder,
    // index m-1 holds the coefficients of band m (Saturated = band N)
    stock_coef: Vec<f64>,
    cash_coef: Vec<f64>,
}

impl PayoffFn {
    pub fn eval(&self, s_t: f64) -> f64 {
        let band = band_index(s_t, &self.ladder, self.strike);
        let m = match band {
            Band::OutOfMoney => {
                return 0.0;
            }
            Band::Vanilla => {
                return match self.kind {
                    PayoffKind::Call => s_t - self.strike,
                    PayoffKind::Put => self.strike - s_t,
                };
            }
            Band::Band(m) => m as usize,
            Band::Saturated => self.stock_coef.len(),
        };
        self.stock_coef[m - 1] * s_t + self.cash_coef[m - 1]
    }

    pub fn ladder(&self) -> &TradeLadder {
        &self.ladder
    }

    /// Affine coefficients `(stock, cash)` of band `m` in `1..=N`, i.e.
    /// the payoff there is `stock * S_T + cash`.
    pub fn band_coefficients(&self, m: u32) -> (f64, f64) {
        (
            self.stock_coef[m as usize - 1],
            self.cash_coef[m as usize - 1],
        )
    }

    // Value of branch j (0 = vanilla, 1..=N = band formulas) at price p,
    // regardless of which band p falls in.
    fn branch_value(&self, j: usize, p: f64) -> f64 {
        if j == 0 {
            match self.kind {
                PayoffKind::Call => p - self.strike,
                PayoffKind::Put => self.strike - p,
            }
        } else {
            self.stock_coef[j - 1] * p + self.cash_coef[j - 1]
        }
    }

    /// Signed mismatch between the two adjacent branch formulas at each
    /// ladder level (and at the strike, where the out-of-money and
    /// vanilla branches meet). All entries are zero up to rounding for a
    /// well-formed strategy; exposed as a continuity diagnostic.
    pub fn boundary_jumps(&self) -> Vec<f64> {
        let mut jumps = Vec::with_capacity(self.ladder.levels.len() + 1);
        jumps.push(self.branch_value(0, self.strike));
        for (i, &p) in self.ladder.levels.iter().enumerate() {
            jumps.push(self.branch_value(i, p) - self.branch_value(i + 1, p));
        }
        jumps
    }
}

/// Option writer's total loss `L(S)` for a put written on capital
/// `capital` (A), holding `Q = A/K` shares: the vanilla loss `Q(K - S)`
/// net of the holder's cumulative hedging income. Equals
/// `(A/K) * put_payoff(S)` exactly, since A and Q cancel out of the
/// per-share value.
pub fn writer_loss(s: f64, strat: &PutStrategy, capital: f64) -> Result<f64> {
    if !(capital > 0.0) || !capital.is_finite() {
        return Err(Error::invalid(
            "writer_loss.capital",
            format!("must be a positive finite real, got {capital}"),
        ));
    }
    Ok(capital / strat.strike() * strat.payoff(s)?)
}
