//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment, lists are written `[a, b, c]`.
//! Later assignments win, so command-line `KEY=VALUE` overrides are simply
//! appended after the file contents.

use std::collections::BTreeMap;
use std::str::FromStr;

use pvfilter::contour::Contour;
use pvfilter::power_counting::DiagramSpec;

use crate::CliError;

pub const KEYS: [&str; 13] = [
    "masses",
    "contour",
    "tau_min",
    "tau_max",
    "tau_steps",
    "omega0",
    "omega1",
    "v0",
    "pulse_T",
    "n_max",
    "ode_step",
    "diagrams",
    "tol",
];

/// Parsed configuration. Absent keys fall back to per-command defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub masses: Option<Vec<f64>>,
    pub contour: Option<Contour>,
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub tau_steps: Option<usize>,
    pub omega0: Option<f64>,
    pub omega1: Option<f64>,
    pub v0: Option<f64>,
    pub pulse_t: Option<f64>,
    pub n_max: Option<usize>,
    pub ode_step: Option<f64>,
    pub diagrams: Option<Vec<DiagramSpec>>,
    pub tol: Option<f64>,
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn number<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    raw.trim()
        .parse()
        .map_err(|e| config_error(format!("{key}: cannot parse '{raw}': {e}")))
}

fn float(key: &str, raw: &str) -> Result<f64, CliError> {
    let value: f64 = number(key, raw)?;
    if !value.is_finite() {
        return Err(config_error(format!("{key}: must be finite, got '{raw}'")));
    }
    Ok(value)
}

fn float_list(key: &str, raw: &str) -> Result<Vec<f64>, CliError> {
    let inner = raw
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| config_error(format!("{key}: expected a bracketed list, got '{raw}'")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|x| float(key, x)).collect()
}

impl RunConfig {
    /// Parses configuration text followed by `KEY=VALUE` overrides.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self, CliError> {
        let mut raw = BTreeMap::new();
        let file_lines = text.lines().enumerate().map(|(i, l)| (Some(i + 1), l));
        let override_lines = overrides.iter().map(|l| (None, l.as_str()));
        for (line_no, line) in file_lines.chain(override_lines) {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = line_no.map(|n| format!("line {n}: ")).unwrap_or_default();
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_error(format!("{at}expected key=value, got '{line}'")))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(config_error(format!(
                    "{at}unknown key '{key}' (known keys: {})",
                    KEYS.join(", ")
                )));
            }
            raw.insert(key.to_string(), value.trim().to_string());
        }

        let mut cfg = RunConfig::default();
        for (key, value) in &raw {
            match key.as_str() {
                "masses" => cfg.masses = Some(float_list(key, value)?),
                "contour" => {
                    cfg.contour = Some(Contour::from_str(value).map_err(|e| config_error(format!("contour: {e}")))?)
                }
                "tau_min" => cfg.tau_min = Some(float(key, value)?),
                "tau_max" => cfg.tau_max = Some(float(key, value)?),
                "tau_steps" => cfg.tau_steps = Some(number(key, value)?),
                "omega0" => cfg.omega0 = Some(float(key, value)?),
                "omega1" => cfg.omega1 = Some(float(key, value)?),
                "v0" => cfg.v0 = Some(float(key, value)?),
                "pulse_T" => cfg.pulse_t = Some(float(key, value)?),
                "n_max" => cfg.n_max = Some(number(key, value)?),
                "ode_step" => cfg.ode_step = Some(float(key, value)?),
                "diagrams" => {
                    let specs = value
                        .split(';')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.trim().parse::<DiagramSpec>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| config_error(e.to_string()))?;
                    cfg.diagrams = Some(specs);
                }
                _ => cfg.tol = Some(float(key, value)?),
            }
        }
        Ok(cfg)
    }

    /// `tau_steps` evenly spaced points on `[tau_min, tau_max]`.
    pub fn tau_grid(&self, default: (f64, f64, usize)) -> Result<Vec<f64>, CliError> {
        let lo = self.tau_min.unwrap_or(default.0);
        let hi = self.tau_max.unwrap_or(default.1);
        let steps = self.tau_steps.unwrap_or(default.2);
        if steps == 0 {
            return Err(config_error("tau_steps: the tau grid is empty"));
        }
        if hi < lo {
            return Err(config_error(format!("tau_max ({hi}) is below tau_min ({lo})")));
        }
        if steps == 1 {
            return Ok(vec![lo]);
        }
        Ok((0..steps)
            .map(|i| {
                if i == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                }
            })
            .collect())
    }
}
