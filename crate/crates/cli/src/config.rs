//! JSON run configuration and its mapping onto core types.

use serde::{Deserialize, Serialize};

use ladder_pricing::{
    CallStrategy, HullWhiteParams, MarketParams, McConfig, OptionKind, PutStrategy, RateModel,
    ThetaFn, VasicekParams,
};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub market: MarketSpec,
    pub option_kind: OptionKind,
    pub strategy: StrategySpec,
    pub rate_model: RateModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MarketSpec {
    pub spot: f64,
    pub equity_vol: f64,
    pub maturity: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    pub alpha: f64,
    pub beta: f64,
    pub n_trades: u32,
    pub strike: f64,
    /// Put trigger offset δ; must be 0 for pricing. Ignored for calls.
    #[serde(default)]
    pub trigger_offset: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RateModelSpec {
    Fixed {
        r: f64,
    },
    Vasicek {
        a: f64,
        theta: f64,
        rate_vol: f64,
        r0: f64,
    },
    HullWhite {
        a: f64,
        theta: ThetaSpec,
        rate_vol: f64,
        r0: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ThetaSpec {
    Constant { value: f64 },
    Affine { intercept: f64, slope: f64 },
    Piecewise { times: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub n_paths: u64,
    #[serde(default = "default_steps")]
    pub n_steps: u32,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub antithetic: bool,
}

fn default_steps() -> u32 {
    128
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Alpha,
    Beta,
    NTrades,
    Strike,
    Maturity,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Beta => "beta",
            SweepParam::NTrades => "n_trades",
            SweepParam::Strike => "strike",
            SweepParam::Maturity => "maturity",
        }
    }
}

/// Either side of the strategy union, validated.
#[derive(Debug, Clone)]
pub enum Strategy {
    Call(CallStrategy),
    Put(PutStrategy),
}

impl RunConfig {
    pub fn market(&self) -> ladder_pricing::Result<MarketParams> {
        MarketParams::new(
            self.market.spot,
            self.market.equity_vol,
            self.market.maturity,
        )
    }

    pub fn strategy(&self) -> ladder_pricing::Result<Strategy> {
        let s = &self.strategy;
        Ok(match self.option_kind {
            OptionKind::Call => {
                Strategy::Call(CallStrategy::new(s.alpha, s.beta, s.n_trades, s.strike)?)
            }
            OptionKind::Put => Strategy::Put(PutStrategy::new(
                s.alpha,
                s.beta,
                s.n_trades,
                s.strike,
                s.trigger_offset,
            )?),
        })
    }

    pub fn rate_model(&self) -> ladder_pricing::Result<RateModel> {
        Ok(match &self.rate_model {
            RateModelSpec::Fixed { r } => RateModel::Fixed { r: *r },
            RateModelSpec::Vasicek {
                a,
                theta,
                rate_vol,
                r0,
            } => RateModel::Vasicek(VasicekParams::new(*a, *theta, *rate_vol, *r0)?),
            RateModelSpec::HullWhite {
                a,
                theta,
                rate_vol,
                r0,
            } => {
                let theta = match theta {
                    ThetaSpec::Constant { value } => ThetaFn::Constant(*value),
                    ThetaSpec::Affine { intercept, slope } => ThetaFn::Affine {
                        intercept: *intercept,
                        slope: *slope,
                    },
                    ThetaSpec::Piecewise { times, values } => ThetaFn::Piecewise {
                        times: times.clone(),
                        values: values.clone(),
                    },
                };
                RateModel::HullWhite(HullWhiteParams::new(*a, theta, *rate_vol, *r0)?)
            }
        })
    }

    pub fn mc(&self) -> ladder_pricing::Result<Option<McConfig>> {
        self.mc
            .as_ref()
            .map(|m| McConfig::new(m.n_paths, m.n_steps, m.seed, m.antithetic))
            .transpose()
    }

    pub fn rate_model_name(&self) -> &'static str {
        match &self.rate_model {
            RateModelSpec::Fixed { .. } => "fixed",
            RateModelSpec::Vasicek { .. } => "vasicek",
            RateModelSpec::HullWhite { .. } => "hull_white",
        }
    }
}
