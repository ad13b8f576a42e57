//! Flat `key = value` configuration with flag overrides.

use std::path::PathBuf;

use serde_json::{json, Value};
use torsionlab::experiments::DEFAULT_SEED;
use torsionlab::pell::{CfOptions, DEFAULT_BIT_CAP, DEFAULT_MAX_STEPS};

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub precision_digits: u32,
    pub cf_max_steps: usize,
    pub coeff_bit_cap: u64,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { precision_digits: 50, cf_max_steps: DEFAULT_MAX_STEPS, coeff_bit_cap: DEFAULT_BIT_CAP, cache_dir: None, seed: DEFAULT_SEED }
    }
}

fn parse_u64(key: &str, v: &str) -> Result<u64, String> {
    let v = v.trim();
    let parsed = match v.strip_prefix("0x").or_else(|| v.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => v.parse(),
    };
    parsed.map_err(|_| format!("{key}: expected an integer, got '{v}'"))
}

impl Config {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "precision_digits" => self.precision_digits = parse_u64(key, value)? as u32,
            "cf_max_steps" => self.cf_max_steps = parse_u64(key, value)? as usize,
            "coeff_bit_cap" => self.coeff_bit_cap = parse_u64(key, value)?,
            "cache_dir" => self.cache_dir = Some(PathBuf::from(value)),
            "seed" => self.seed = parse_u64(key, value)?,
            _ => return Err(format!("unknown configuration key '{key}'")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.precision_digits < 15 {
            return Err("precision_digits must be at least 15".into());
        }
        if self.cf_max_steps == 0 || self.coeff_bit_cap == 0 {
            return Err("budgets must be positive".into());
        }
        Ok(())
    }

    pub fn cf_options(&self) -> CfOptions {
        CfOptions { max_steps: self.cf_max_steps, bit_cap: self.coeff_bit_cap }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "precision_digits": self.precision_digits,
            "cf_max_steps": self.cf_max_steps,
            "coeff_bit_cap": self.coeff_bit_cap,
            "cache_dir": self.cache_dir.as_ref().map(|p| p.display().to_string()),
            "seed": self.seed,
            "code_version": env!("CARGO_PKG_VERSION"),
        })
    }
}
