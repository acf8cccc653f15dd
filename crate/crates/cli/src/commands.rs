//! Subcommand implementations: price, sweep, mc-check.

use std::fmt::Write as _;

use ladder_pricing::{
    call_band_masses, call_price, put_band_masses, put_price, sample_terminal, simulate_paths,
    vanilla_price, Band, McConfig, OptionKind, PriceBreakdown, QuadratureSpec, TerminalLaw,
};

use crate::config::{RunConfig, Strategy};

/// Deliberate mismatch between the terminal-draw estimate and the rest
/// of the pipeline. Exposed for exercising the FAIL path of `mc-check`.
#[derive(Debug, Clone, Copy, Default)]
pub struct McCheckHooks {
    pub perturb_log_mean: f64,
}

pub struct CmdError {
    pub exit_code: u8,
    pub message: String,
}

impl From<ladder_pricing::Error> for CmdError {
    fn from(err: ladder_pricing::Error) -> Self {
        let exit_code = match err {
            ladder_pricing::Error::InvalidParameter { .. } => 2,
            ladder_pricing::Error::QuadratureNonConvergence { .. } => 3,
        };
        CmdError {
            exit_code,
            message: err.to_string(),
        }
    }
}

fn config_error(message: impl Into<String>) -> CmdError {
    CmdError {
        exit_code: 2,
        message: message.into(),
    }
}

// 12 significant digits, locale-independent
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn band_label(band: Band) -> String {
    match band {
        Band::OutOfMoney => "out-of-money".to_string(),
        Band::Vanilla => "vanilla".to_string(),
        Band::Band(m) => format!("band {m}"),
        Band::Saturated => "saturated".to_string(),
    }
}

struct Priced {
    law: TerminalLaw,
    breakdown: PriceBreakdown,
    vanilla: f64,
    masses: Vec<(Band, f64)>,
}

fn price_once(cfg: &RunConfig) -> Result<Priced, CmdError> {
    let market = cfg.market()?;
    let strategy = cfg.strategy()?;
    let rate_model = cfg.rate_model()?;
    let spec = QuadratureSpec::default();
    let law = rate_model.law(&market, &spec)?;
    let (breakdown, vanilla, masses) = match &strategy {
        Strategy::Call(s) => (
            call_price(s, &law)?,
            vanilla_price(OptionKind::Call, s.strike(), &law)?,
            call_band_masses(s, &law)?,
        ),
        Strategy::Put(s) => (
            put_price(s, &law)?,
            vanilla_price(OptionKind::Put, s.strike(), &law)?,
            put_band_masses(s, &law)?,
        ),
    };
    Ok(Priced {
        law,
        breakdown,
        vanilla,
        masses,
    })
}

fn discount_pct(price: f64, vanilla: f64) -> f64 {
    if vanilla == 0.0 {
        0.0
    } else {
        (1.0 - price / vanilla) * 100.0
    }
}

pub fn cmd_price(cfg: &RunConfig) -> Result<String, CmdError> {
    let priced = price_once(cfg)?;
    let kind = match cfg.option_kind {
        OptionKind::Call => "call",
        OptionKind::Put => "put",
    };
    let mut out = String::new();
    writeln!(out, "option kind:        {kind}").unwrap();
    writeln!(out, "rate model:         {}", cfg.rate_model_name()).unwrap();
    writeln!(out, "price:              {}", sig12(priced.breakdown.price)).unwrap();
    writeln!(out, "discount P(0,T):    {}", sig12(priced.law.discount)).unwrap();
    writeln!(out, "vanilla reference:  {}", sig12(priced.vanilla)).unwrap();
    writeln!(
        out,
        "strategy discount:  {} %",
        sig12(discount_pct(priced.breakdown.price, priced.vanilla))
    )
    .unwrap();
    writeln!(out).unwrap();
    writeln!(
        out,
        "{:<14} {:>18} {:>18} {:>18}",
        "band", "mass", "stock_leg", "cash_leg"
    )
    .unwrap();
    for (band, mass) in &priced.masses {
        let legs = priced
            .breakdown
            .band_terms
            .iter()
            .find(|(b, _, _)| b == band);
        match legs {
            Some((_, stock, cash)) => writeln!(
                out,
                "{:<14} {:>18} {:>18} {:>18}",
                band_label(*band),
                sig12(*mass),
                sig12(*stock),
                sig12(*cash)
            )
            .unwrap(),
            None => writeln!(
                out,
                "{:<14} {:>18} {:>18} {:>18}",
                band_label(*band),
                sig12(*mass),
                "-",
                "-"
            )
            .unwrap(),
        }
    }
    Ok(out)
}

const SWEEP_HEADER: &str = "param,value,strategy_price,vanilla_price,discount_pct,\
deep_band_mass,vanilla_band_mass,saturated_band_mass";

fn apply_sweep_value(cfg: &RunConfig, value: f64) -> Result<RunConfig, CmdError> {
    use crate::config::SweepParam;
    let sweep = cfg.sweep.as_ref().unwrap();
    let mut c = cfg.clone();
    match sweep.param {
        SweepParam::Alpha => c.strategy.alpha = value,
        SweepParam::Beta => c.strategy.beta = value,
        SweepParam::Strike => c.strategy.strike = value,
        SweepParam::Maturity => c.market.maturity = value,
        SweepParam::NTrades => {
            if value < 1.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
                return Err(config_error(format!(
                    "sweep.values: n_trades sweep needs positive integers, got {value}"
                )));
            }
            c.strategy.n_trades = value as u32;
        }
    }
    Ok(c)
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<String, CmdError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| config_error("sweep: section missing"))?;
    if sweep.values.is_empty() {
        return Err(config_error("sweep.values: must be non-empty"));
    }
    let mut out = String::new();
    writeln!(out, "{SWEEP_HEADER}").unwrap();
    for &value in &sweep.values {
        let c = apply_sweep_value(cfg, value)?;
        let priced = price_once(&c)?;
        let mass_of = |want: Band| {
            priced
                .masses
                .iter()
                .find(|(b, _)| *b == want)
                .map(|(_, m)| *m)
                .unwrap_or(0.0)
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            sweep.param.name(),
            sig12(value),
            sig12(priced.breakdown.price),
            sig12(priced.vanilla),
            sig12(discount_pct(priced.breakdown.price, priced.vanilla)),
            sig12(mass_of(Band::OutOfMoney)),
            sig12(mass_of(Band::Vanilla)),
            sig12(mass_of(Band::Saturated)),
        )
        .unwrap();
    }
    Ok(out)
}

pub struct McCheckReport {
    pub text: String,
    pub pass: bool,
}

pub fn cmd_mc_check(cfg: &RunConfig, hooks: &McCheckHooks) -> Result<McCheckReport, CmdError> {
    let mc: McConfig = cfg
        .mc()?
        .ok_or_else(|| config_error("mc: section missing"))?;
    let market = cfg.market()?;
    let strategy = cfg.strategy()?;
    let rate_model = cfg.rate_model()?;
    let priced = price_once(cfg)?;
    let closed_form = priced.breakdown.price;

    let sampling_law = TerminalLaw {
        log_mean: priced.law.log_mean + hooks.perturb_log_mean,
        ..priced.law
    };

    let (terminal, path) = match &strategy {
        Strategy::Call(s) => {
            let pf = s.payoff_fn();
            let terminal = sample_terminal(&sampling_law, |x| pf.eval(x), &mc);
            let path = simulate_paths(&market, &rate_model, |x| pf.eval(x), &mc)?;
            (terminal, path)
        }
        Strategy::Put(s) => {
            let pf = s.payoff_fn()?;
            let terminal = sample_terminal(&sampling_law, |x| pf.eval(x), &mc);
            let path = simulate_paths(&market, &rate_model, |x| pf.eval(x), &mc)?;
            (terminal, path)
        }
    };

    let z_terminal = terminal.z_score(closed_form);
    let z_path = path.z_score(closed_form);
    let pass = z_terminal <= 3.0 && z_path <= 3.0;

    let mut out = String::new();
    writeln!(out, "closed-form price:  {}", sig12(closed_form)).unwrap();
    writeln!(
        out,
        "terminal-draw:      {} +/- {} (z = {:.3})",
        sig12(terminal.mean),
        sig12(terminal.std_error),
        z_terminal
    )
    .unwrap();
    writeln!(
        out,
        "path-simulation:    {} +/- {} (z = {:.3})",
        sig12(path.mean),
        sig12(path.std_error),
        z_path
    )
    .unwrap();
    writeln!(
        out,
        "paths: {}  steps: {}  seed: {}  antithetic: {}",
        mc.n_paths, mc.n_steps, mc.seed, mc.antithetic
    )
    .unwrap();
    writeln!(out, "verdict: {}", if pass { "PASS" } else { "FAIL" }).unwrap();
    Ok(McCheckReport { text: out, pass })
}
