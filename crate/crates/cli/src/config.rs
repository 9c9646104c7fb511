use std::fs;
use std::path::Path;

use anyhow::Context;
use rsr_core::abelmono::TransportOptions;
use rsr_core::tolerances::{Tolerances, STEP_BUDGET};

use crate::args::{Format, GlobalArgs};
use crate::error::InputError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub steps: usize,
    pub threads: Option<usize>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { tolerances: Tolerances::default(), steps: STEP_BUDGET, threads: None, format: Format::Json }
    }
}

fn config_error(msg: impl Into<String>) -> InputError {
    InputError::new("config", msg)
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, InputError> {
    v.parse().map_err(|_| config_error(format!("{key}: cannot parse '{v}'")))
}

impl RunConfig {
    /// `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let mut c = RunConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| config_error(format!("line {}: expected key=value", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "tol_alg" => c.tolerances.tol_alg = number(k, v)?,
                "tol_char" => c.tolerances.tol_char = number(k, v)?,
                "tol_mono" => c.tolerances.tol_mono = number(k, v)?,
                "tol_root" => c.tolerances.tol_root = number(k, v)?,
                "steps" => c.steps = number(k, v)?,
                "threads" => c.threads = Some(number(k, v)?),
                "format" => {
                    c.format = match v {
                        "json" => Format::Json,
                        "csv" => Format::Csv,
                        "svg" => Format::Svg,
                        "text" => Format::Text,
                        _ => return Err(config_error(format!("format: unknown '{v}'"))),
                    }
                }
                _ => return Err(config_error(format!("unknown key '{k}'"))),
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Self::parse(&text)?)
    }

    pub fn resolve(g: &GlobalArgs) -> anyhow::Result<Self> {
        let mut c = match &g.config {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        let t = &mut c.tolerances;
        for (slot, flag) in [
            (&mut t.tol_alg, g.tol_alg),
            (&mut t.tol_char, g.tol_char),
            (&mut t.tol_mono, g.tol_mono),
            (&mut t.tol_root, g.tol_root),
        ] {
            if let Some(v) = flag {
                *slot = v;
            }
        }
        if let Some(s) = g.steps {
            c.steps = s;
        }
        if g.threads.is_some() {
            c.threads = g.threads;
        }
        if let Some(f) = g.format {
            c.format = f;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), InputError> {
        let t = &self.tolerances;
        for (name, v) in [("tol_alg", t.tol_alg), ("tol_char", t.tol_char), ("tol_mono", t.tol_mono), ("tol_root", t.tol_root)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_error(format!("{name} must be positive, got {v}")));
            }
        }
        if self.steps < 100 {
            return Err(config_error(format!("step budget must be at least 100, got {}", self.steps)));
        }
        if self.threads == Some(0) {
            return Err(config_error("threads must be at least 1"));
        }
        Ok(())
    }

    pub fn transport(&self) -> TransportOptions {
        TransportOptions { step_budget: self.steps, ..TransportOptions::default() }
    }
}
