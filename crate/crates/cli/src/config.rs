//! Configuration resolution: built-in defaults < config file < flags.

use dehaze_core::{BlendStrategy, KernelMode, PipelineConfig};
use std::path::Path;

use crate::CliError;

/// Partial configuration; `None` fields defer to the next layer down.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<KernelMode>,
    pub orders: Option<Vec<f64>>,
    pub truncation: Option<usize>,
    pub boost: Option<f64>,
    pub levels: Option<usize>,
    pub sigma0: Option<f64>,
    pub lambda: Option<f64>,
    pub approx_gain: Option<f64>,
    pub strategy: Option<BlendStrategy>,
    pub stretch: Option<bool>,
}

impl Overrides {
    /// Applies `self` on top of `base`; set fields win.
    fn apply(&self, base: &mut PipelineConfig) {
        if let Some(mode) = self.mode {
            base.mode = mode;
        }
        if let Some(orders) = &self.orders {
            base.orders = orders.clone();
        }
        if let Some(k) = self.truncation {
            base.truncation = k;
        }
        if let Some(boost) = self.boost {
            base.boost = boost;
        }
        if let Some(levels) = self.levels {
            base.levels = levels;
        }
        if let Some(sigma0) = self.sigma0 {
            base.sigma0 = sigma0;
        }
        if let Some(lambda) = self.lambda {
            base.lambda = lambda;
        }
        if let Some(gain) = self.approx_gain {
            base.approx_gain = Some(gain);
        }
        if let Some(strategy) = self.strategy {
            base.strategy = strategy;
        }
        if let Some(stretch) = self.stretch {
            base.stretch = stretch;
        }
    }
}

pub fn parse_mode(value: &str) -> Result<KernelMode, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "hpfc" => Ok(KernelMode::HighPass),
        "hbfc" => Ok(KernelMode::HighBoost),
        other => Err(CliError::Usage(format!(
            "invalid mode '{other}' (expected hpfc or hbfc)"
        ))),
    }
}

pub fn parse_strategy(value: &str) -> Result<BlendStrategy, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "weighted" => Ok(BlendStrategy::Weighted),
        "argmax" => Ok(BlendStrategy::ArgMax),
        other => Err(CliError::Usage(format!(
            "invalid strategy '{other}' (expected weighted or argmax)"
        ))),
    }
}

pub fn parse_switch(value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(CliError::Usage(format!(
            "invalid switch '{other}' (expected on or off)"
        ))),
    }
}

pub fn parse_orders(value: &str) -> Result<Vec<f64>, CliError> {
    value
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("invalid order '{}'", part.trim())))
        })
        .collect()
}

fn parse_number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value '{value}' for key '{key}'")))
}

/// Parses the flat `key=value` config format (UTF-8, `#` comments).
pub fn parse_config_file(path: &Path) -> Result<Overrides, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = Overrides::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "mode" => out.mode = Some(parse_mode(value)?),
            "orders" => out.orders = Some(parse_orders(value)?),
            "k" => out.truncation = Some(parse_number(key, value)?),
            "boost" => out.boost = Some(parse_number(key, value)?),
            "levels" => out.levels = Some(parse_number(key, value)?),
            "sigma0" => out.sigma0 = Some(parse_number(key, value)?),
            "lambda" => out.lambda = Some(parse_number(key, value)?),
            "approx-gain" => out.approx_gain = Some(parse_number(key, value)?),
            "strategy" => out.strategy = Some(parse_strategy(value)?),
            "stretch" => out.stretch = Some(parse_switch(value)?),
            other => {
                return Err(CliError::Usage(format!(
                    "{}:{}: unknown config key '{other}'",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(out)
}

/// Resolves the effective configuration. Precedence is total: defaults,
/// then the config file, then command-line flags.
pub fn resolve(
    config_path: Option<&Path>,
    flags: &Overrides,
) -> Result<PipelineConfig, CliError> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = config_path {
        parse_config_file(path)?.apply(&mut cfg);
    }
    flags.apply(&mut cfg);
    cfg.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}
