//! Pricing engine for European calls and puts whose holder follows a
//! discrete linear investment strategy: the underlying is traded in `N`
//! equal capital tranches at equally spaced price levels between the
//! strike and `(1 ± α)K`, linearly ramping exposure to a fraction `β`.
//! Hedging income lowers the option's intrinsic value band by band, and
//! the resulting piecewise-affine payoff admits closed-form prices under
//! fixed, Vasicek, and Hull-White interest rates, each verifiable against
//! an independent Monte Carlo oracle.

// validation uses `!(x > 0.0)` throughout so NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// tabulated constants (quadrature nodes, erf minimax coefficients) keep
// their published digits even where f64 rounds them
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod mc;
pub mod numerics;
pub mod pricer;
pub mod rates;
pub mod strategy;

pub use error::{Error, Result};
pub use mc::{sample_terminal, simulate_paths, McConfig, McEstimate};
pub use numerics::{integrate, normal_cdf, QuadratureSpec};
pub use pricer::{
    call_band_masses, call_price, lognormal_band_moments, put_band_masses, put_price,
    vanilla_price, OptionKind, PriceBreakdown,
};
pub use rates::{
    fixed_law, hw_bond, hw_law, hw_theta_integral, vasicek_bond, vasicek_law, HullWhiteParams,
    MarketParams, RateModel, TerminalLaw, ThetaFn, VasicekParams,
};
pub use strategy::{
    band_index, writer_loss, Band, CallStrategy, LadderDirection, PayoffFn, PutStrategy,
    TradeLadder,
};
